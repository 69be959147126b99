from django.test import SimpleTestCase

from verification.bf_theory import bf_closed, bf_cylinder
from verification.discrete import AXIAL, ROTATION, hodge, hodge_residuals
from verification.exceptions import StructureError, UnsupportedModelError
from verification.parser import load
from verification.quantization import (
    effective_action, omega_on_exponential, pullback_boundary_action, split, split_from_data,
    split_identities, verify_quantum,
)
from verification.report import Status
from verification.services import VerificationService

SPLIT_IDS = [
    'good_splitting', 'discontinuous_splitting', 'y_equation', 'split_master',
    'omega_exp', 'laplacian_exp', 'emqme',
]

COUPLED_SOURCE = """\
model coupled_split
var x ghost 0
var xplus ghost -1
var q ghost 0
var qplus ghost -1
var eta ghost 1
var p_q ghost 0
var p_eta ghost -1
pair x xplus
pair q qplus
symplectic k 0
action xplus*eta + x*q + 0.5*x^2
polarize q p_q
polarize eta p_eta
boundary_action eta*q - eta*p_q
"""

QUADRATIC_SOURCE = """\
model quadratic_split
var x ghost 0
var xplus ghost -1
var q ghost 0
var eta ghost 1
var p_q ghost 0
var p_eta ghost -1
pair x xplus
symplectic k 0
action xplus*eta + x*q + 0.5*q^2
polarize q p_q
polarize eta p_eta
boundary_action eta*p_q^2
"""


def by_id(entries):
    return {e.check_id: e for e in entries}


class SplitPresetTests(SimpleTestCase):

    def setUp(self):
        self.model = load(VerificationService.preset_source('toy_split'))
        self.sm = self.model.split

    def test_split_identities_hold(self):
        entries = split_identities(self.sm)
        self.assertEqual([e.check_id for e in entries], SPLIT_IDS)
        for entry in entries:
            with self.subTest(check=entry.check_id):
                self.assertEqual(entry.status, Status.PASS, entry.residual)

    def test_pullback_substitutes_momenta(self):
        table = self.sm.table
        expected = table.poly('eta') * (table.poly('q') + table.poly('x'))
        self.assertEqual(pullback_boundary_action(self.sm), expected)

    def test_omega_on_exponential_matches_pullback_for_linear_momenta(self):
        self.assertEqual(omega_on_exponential(self.sm), pullback_boundary_action(self.sm))

    def test_vector_field_splits_into_bulk_and_boundary_parts(self):
        names = sorted(self.sm.names(self.sm.Q.components))
        self.assertEqual(names, ['q', 'x', 'xplus'])
        self.assertEqual(sorted(self.sm.names(self.sm.Q_B.components)), ['q'])

    def test_fibre_coordinate_must_not_be_paired(self):
        bv = self.model.bv
        with self.assertRaises(StructureError):
            split_from_data('bad', bv.D, bv.S, ['q'], ['x'], bv.S)

    def test_wrong_boundary_action_breaks_master_equations(self):
        table = self.sm.table
        wrong = (table.poly('eta') * table.poly('q')).scale(3)
        sm = split_from_data('wrong_boundary', self.sm.D, self.sm.S, ['q', 'eta'], ['p_q', 'p_eta'], wrong)
        entries = by_id(split_identities(sm))
        self.assertEqual(entries['good_splitting'].status, Status.PASS)
        self.assertEqual(entries['omega_exp'].status, Status.PASS)
        self.assertEqual(entries['split_master'].status, Status.FAIL)
        self.assertEqual(entries['emqme'].status, Status.FAIL)


class SplitHypothesisTests(SimpleTestCase):

    def test_boundary_partner_in_the_bulk_breaks_the_splitting(self):
        sm = load(COUPLED_SOURCE).split
        self.assertFalse(sm.omega_blocks['YB'].is_zero())
        entries = by_id(split_identities(sm))
        self.assertEqual(entries['good_splitting'].status, Status.FAIL)
        self.assertEqual(entries['discontinuous_splitting'].status, Status.FAIL)
        self.assertIn('qplus', entries['good_splitting'].residual)

    def test_quadratic_momentum_picks_up_an_ordering_term(self):
        sm = load(QUADRATIC_SOURCE).split
        entries = by_id(split_identities(sm))
        self.assertEqual(entries['good_splitting'].status, Status.PASS)
        self.assertEqual(entries['omega_exp'].status, Status.FAIL)
        self.assertIn('hbar', entries['omega_exp'].residual)


class BfSplitTests(SimpleTestCase):

    def test_quantum_checks_at_low_order(self):
        m = bf_cylinder(2, 1, ROTATION)
        sm = split(m)
        self.assertTrue(all(r.is_zero() for r in sm.checks['adapted']))
        state = effective_action(sm, hodge(m.complex), 2)
        entries = by_id(verify_quantum(sm, state))
        self.assertTrue(entries['omega_squared'].passed)
        self.assertTrue(entries['mqme'].passed)
        self.assertTrue(entries['T_hat_psi'].passed)

    def test_quantum_checks_in_product_gauge(self):
        m = bf_cylinder(2, 1, ROTATION)
        sm = split(m)
        state = effective_action(sm, hodge(m.complex, gauge=AXIAL), 2)
        self.assertTrue(by_id(verify_quantum(sm, state))['mqme'].passed)

    def test_higher_transport_chains_vanish(self):
        m = bf_cylinder(3, 1, ROTATION)
        state = effective_action(split(m), hodge(m.complex), 3)
        self.assertFalse(state.chains[0].is_zero_matrix)
        self.assertTrue(all(chain.is_zero_matrix for chain in state.chains[1:]))

    def test_cell_split_reports_failed_hypotheses_as_skipped(self):
        entries = by_id(split_identities(split(bf_cylinder(2, 1, ROTATION))))
        self.assertEqual(list(entries), SPLIT_IDS)
        discontinuous = entries['discontinuous_splitting']
        self.assertEqual(discontinuous.status, Status.SKIPPED)
        self.assertTrue(discontinuous.details['residual'])
        self.assertNotEqual(entries['good_splitting'].status, Status.FAIL)
        for check_id in SPLIT_IDS[2:]:
            with self.subTest(check=check_id):
                self.assertEqual(entries[check_id].status, Status.SKIPPED)
                self.assertIn('discontinuous_splitting', entries[check_id].details['reason'])

    def test_single_segment_cannot_be_polarised(self):
        with self.assertRaises(UnsupportedModelError):
            split(bf_cylinder(1, 1, ROTATION))

    def test_truncation_order_must_be_positive(self):
        m = bf_cylinder(2, 1, ROTATION)
        with self.assertRaises(ValueError):
            effective_action(split(m), hodge(m.complex), 0)

    def test_closed_complex_cannot_be_polarised(self):
        with self.assertRaises(UnsupportedModelError):
            split(bf_closed(2, 1, ROTATION))

    def test_axial_field_cannot_be_polarised(self):
        with self.assertRaises(UnsupportedModelError):
            split(bf_cylinder(2, 1, AXIAL))


class CorruptedPropagatorTests(SimpleTestCase):

    def setUp(self):
        self.m = bf_cylinder(2, 0, ROTATION)
        self.sm = split(self.m)
        self.hd = hodge(self.m.complex)

    def test_dropped_propagator_entry_breaks_homotopy(self):
        broken = hodge(bf_cylinder(2, 1, ROTATION).complex).with_dropped_entry(1, 0, 0)
        residuals = hodge_residuals(broken)
        self.assertFalse(all(m.is_zero_matrix for m in residuals['homotopy']))

    def test_intact_propagator_satisfies_modified_master_equation(self):
        entries = by_id(verify_quantum(self.sm, effective_action(self.sm, self.hd, 2)))
        self.assertEqual(entries['mqme'].status, Status.PASS, entries['mqme'].residual)

    def test_dropped_propagator_entry_breaks_modified_master_equation(self):
        broken = self.hd.with_dropped_entry(1, 1, 0)
        self.assertNotEqual(broken.eta[1], self.hd.eta[1])
        entries = by_id(verify_quantum(self.sm, effective_action(self.sm, broken, 2)))
        self.assertEqual(entries['mqme'].status, Status.FAIL)
