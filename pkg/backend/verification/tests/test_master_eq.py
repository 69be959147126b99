from django.test import SimpleTestCase

from verification.algebra import HBAR, I, GradedPoly, VariableTable, mul
from verification.bf_theory import bf_cylinder
from verification.discrete import ROTATION
from verification.exceptions import DegenerateDegreeError
from verification.master_eq import (
    BvModel, check_action_flow, check_cme, check_equivariant, check_qme, check_weak_bv, equivariant_parts,
    lemma_chain,
)
from verification.parser import load
from verification.report import Status
from verification.services import VerificationService
from verification.symplectic import DarbouxStructure, Derivation


def preset(name):
    return load(VerificationService.preset_source(name)).bv


class GaugeModelTests(SimpleTestCase):

    def setUp(self):
        self.model = preset('toy_gauge')

    def test_classical_and_quantum_master_equations(self):
        self.assertEqual(check_cme(self.model).status, Status.PASS)
        self.assertEqual(check_qme(self.model).status, Status.PASS)
        self.assertEqual(check_cme(self.model).residual, '')

    def test_hamiltonian_identities(self):
        self.assertTrue(self.model.is_hamiltonian())
        self.assertTrue(lemma_chain(self.model).passed)
        self.assertTrue(check_action_flow(self.model).passed)
        self.assertTrue(check_weak_bv(self.model).passed)

    def test_T_vanishes(self):
        self.assertTrue(self.model.T.is_zero())


class BrokenModelTests(SimpleTestCase):

    def test_mass_term_breaks_cme(self):
        model = preset('toy_gauge_broken')
        entry = check_cme(model)
        self.assertEqual(entry.status, Status.FAIL)
        self.assertNotEqual(entry.residual, '')
        self.assertEqual(check_qme(model).status, Status.FAIL)

    def test_lemma_chain_holds_without_cme(self):
        self.assertTrue(lemma_chain(preset('toy_gauge_broken')).passed)


class OddPairModelTests(SimpleTestCase):

    def setUp(self):
        self.model = preset('toy_xy_theta')

    def test_cme_holds_qme_fails(self):
        self.assertTrue(check_cme(self.model).passed)
        entry = check_qme(self.model)
        self.assertEqual(entry.status, Status.FAIL)
        self.assertIn('hbar', entry.residual)

    def test_T_is_the_laplacian_term(self):
        self.assertEqual(self.model.T, GradedPoly.constant(self.model.table, -I * HBAR))


class WeakModelTests(SimpleTestCase):

    def setUp(self):
        self.table = VariableTable('weak')
        x, xp = self.table.declare('x', 0), self.table.declare('xp', -1)
        self.D = DarbouxStructure(self.table, [(x, xp)], 0)

    def test_non_hamiltonian_field_skips_lemma_chain(self):
        Q = Derivation.from_names(self.table, {'xp': self.table.poly('x')}, 1)
        model = BvModel('weak', self.D, GradedPoly.zero(self.table), Q)
        self.assertFalse(model.is_hamiltonian())
        self.assertEqual(lemma_chain(model).status, Status.SKIPPED)
        self.assertEqual(check_action_flow(model).status, Status.SKIPPED)

    def test_degree_minus_one_rejects_euler_hamiltonian(self):
        table = VariableTable('km1')
        x, p = table.declare('x', 0), table.declare('p', -2)
        model = BvModel('km1', DarbouxStructure(table, [(x, p)], -1), GradedPoly.zero(table))
        entry = check_weak_bv(model)
        self.assertIn('hamiltonian', entry.details)
        self.assertEqual(check_cme(model).status, Status.SKIPPED)
        with self.assertRaises(DegenerateDegreeError):
            check_weak_bv(model, strict=True)


class EquivariantModelTests(SimpleTestCase):

    def test_equivariant_field_is_weak_bv(self):
        m = bf_cylinder(2, 1, ROTATION)
        entry = check_weak_bv(m.bv)
        self.assertTrue(entry.passed, entry.residual)

    def test_action_splits_in_u(self):
        m = preset('toy_equivariant')
        table = m.table
        S, S_iota = equivariant_parts(m.S)
        self.assertEqual(S, mul(table.poly('theta1'), table.poly('x0')))
        self.assertEqual(S_iota, mul(table.poly('theta0'), table.poly('x1')))

    def test_file_model_satisfies_equivariant_identities(self):
        entry = check_equivariant(preset('toy_equivariant'), ROTATION)
        self.assertEqual(entry.status, Status.PASS, entry.residual)
        self.assertEqual(entry.details['vector'], ROTATION)
        self.assertIn('x0', entry.details['S_L'])
        self.assertIn('x1', entry.details['S_L'])

    def test_non_closed_base_action_fails(self):
        source = VerificationService.preset_source('toy_equivariant').replace(
            'action theta1*x0', 'action theta1*x0 + x1*theta1')
        entry = check_equivariant(load(source).bv, ROTATION)
        self.assertEqual(entry.status, Status.FAIL)

    def test_quadratic_u_dependence_is_skipped(self):
        source = VerificationService.preset_source('toy_equivariant').replace(
            'u*theta0*x1', 'u*theta0*x1 + u^2*theta0^2')
        entry = check_equivariant(load(source).bv, ROTATION)
        self.assertEqual(entry.status, Status.SKIPPED)
        self.assertIn('linear in u', entry.details['reason'])
