from django.test import SimpleTestCase

from verification.algebra import I, U, GradedPoly, mul
from verification.bf_theory import (
    bf_closed, bf_cylinder, check_tangency, equivariant_extend, equivariant_residuals,
    lie_S_L_boundary, proportionality, tangency_obstruction, transgress_action,
)
from verification.boundary import (
    boundary_T, kernel_and_project, modified_cme_residuals, verify_summary,
)
from verification.discrete import (
    AXIAL, ROTATION, build_closed_mode_complex, build_cylinder_mode_complex, contraction,
)
from verification.exceptions import StructureError
from verification.report import Status
from verification.symplectic import apply, bv_bracket


class ClosedModelTests(SimpleTestCase):

    def setUp(self):
        self.model = bf_closed(2, 1, ROTATION)

    def test_geometric_field_is_hamiltonian(self):
        self.assertTrue(self.model.bv.is_hamiltonian())
        self.assertTrue((self.model.S - self.model.S_prime).is_zero())

    def test_equivariant_identities(self):
        for label, residual in equivariant_residuals(self.model).items():
            with self.subTest(identity=label):
                self.assertTrue(residual.is_zero())

    def test_ratios_to_u_S_L(self):
        m = self.model
        self.assertEqual(proportionality(m.bv.T, m.S_L.scale(U)), -1)
        self.assertEqual(proportionality(bv_bracket(m.S_hat, m.S_hat, m.D), m.S_L.scale(U)), -2)

    def test_plain_action_matches_transgression(self):
        X = build_closed_mode_complex(2, 1)
        self.assertEqual(transgress_action(X).render(), bf_closed(2, 1, None).S.render())


class CylinderModelTests(SimpleTestCase):

    def test_stokes_term_on_the_cylinder(self):
        m = bf_cylinder(2, 1, None)
        self.assertFalse((m.S - m.S_prime).is_zero())
        self.assertTrue(m.S_iota.is_zero())
        self.assertFalse(m.equivariant)

    def test_rotation_is_tangent(self):
        m = bf_cylinder(2, 1, ROTATION)
        self.assertTrue(tangency_obstruction(m).is_zero())
        entries = check_tangency(m)
        self.assertEqual([e.check_id for e in entries], ['tangency'])
        self.assertTrue(entries[0].passed)

    def test_axial_residual_lives_on_the_boundary(self):
        m = bf_cylinder(2, 1, AXIAL)
        residual = tangency_obstruction(m)
        self.assertFalse(residual.is_zero())
        entries = check_tangency(m)
        self.assertEqual(entries[0].status, Status.FAIL)
        self.assertEqual(entries[1].check_id, 'transversal_support')
        self.assertLessEqual(residual.field_support(), m.boundary_collar())
        self.assertTrue(entries[1].passed)

    def test_axial_residual_stays_off_interior_nodes(self):
        m = bf_cylinder(4, 1, AXIAL)
        support = tangency_obstruction(m).field_support()
        self.assertTrue(support)
        self.assertLessEqual(support, m.boundary_collar())
        interior = {m.table.key(name) for name in ('cplus1', 'cplus3', 'Aplus_t1', 'Aplus_t3')}
        self.assertFalse(support & interior)
        entries = check_tangency(m)
        self.assertEqual(entries[1].check_id, 'transversal_support')
        self.assertTrue(entries[1].passed, entries[1].details)

    def test_boundary_collar_of_four_segments(self):
        m = bf_cylinder(4, 0, ROTATION)
        names = set(m.names(m.boundary_collar()))
        self.assertIn('c0', names)
        self.assertIn('Aplus_p3', names)
        self.assertNotIn('c1', names)
        self.assertNotIn('Ap3', names)

    def test_T_is_minus_u_S_L_for_rotation(self):
        residuals = equivariant_residuals(bf_cylinder(2, 1, ROTATION))
        self.assertTrue(residuals['T_equals_minus_u_S_L'].is_zero())
        self.assertTrue(residuals['bracket_S_iota_S_L'].is_zero())
        self.assertTrue(residuals['bracket_S_hat'].is_zero())

    def test_S_hat_bracket_holds_for_the_axial_field(self):
        residuals = equivariant_residuals(bf_cylinder(2, 1, AXIAL))
        self.assertTrue(residuals['bracket_S_hat'].is_zero())
        self.assertFalse(residuals['T_equals_minus_u_S_L'].is_zero())

    def test_S_L_pairs_B_with_lie_derivative_of_A(self):
        m = bf_cylinder(2, 1, ROTATION)
        expected = GradedPoly.zero(m.table)
        for x, theta in zip(m.x_keys, m.theta_keys):
            sign = -1 if m.table.ghost(x) % 2 else 1
            term = mul(GradedPoly.generator(m.table, m.table.var(theta)),
                       GradedPoly.generator(m.table, m.table.var(x)))
            expected = expected + term.scale(sign * I)
        self.assertEqual(m.S_L, expected)
        self.assertEqual(m.S_L, bv_bracket(m.S, m.S_iota, m.D).scale(-1))

    def test_extension_rejects_foreign_vector_field(self):
        m = bf_cylinder(2, 1, None)
        other = contraction(ROTATION, build_cylinder_mode_complex(2, 1))
        with self.assertRaises(StructureError):
            equivariant_extend(m, other)

    def test_lie_S_L_is_a_boundary_term(self):
        _, outside = lie_S_L_boundary(bf_cylinder(2, 1, ROTATION))
        self.assertEqual(outside, set())


class CylinderReductionTests(SimpleTestCase):

    def test_summary_of_reduced_structure(self):
        bm = kernel_and_project(bf_cylinder(2, 1, ROTATION).bv)
        self.assertTrue(bm.boundary)
        self.assertTrue(verify_summary(bm).passed)

    def test_boundary_T_is_the_flow_of_S_L(self):
        m = bf_cylinder(2, 1, ROTATION)
        self.assertEqual(boundary_T(m.bv), apply(m.Q, m.S_L).scale(U))
        self.assertTrue(boundary_T(bf_cylinder(2, 1, None).bv).is_zero())

    def test_modified_cme_for_plain_theory(self):
        bm = kernel_and_project(bf_cylinder(2, 0, None).bv)
        self.assertTrue(all(r.is_zero() for r in modified_cme_residuals(bm)))

    def test_single_segment_reduces_along_null_vectors(self):
        bm = kernel_and_project(bf_cylinder(1, 1, ROTATION).bv)
        self.assertEqual(bm.boundary_names(), ['c0', 'Ap0', 'Aplus_p0', 'B0'])
        self.assertFalse(bm.is_coordinate)
        self.assertEqual(len(bm.kernel), 8)
        self.assertTrue(verify_summary(bm).passed)

    def test_single_segment_modified_cme(self):
        for n in (0, 1):
            with self.subTest(n=n):
                bm = kernel_and_project(bf_cylinder(1, n, None).bv)
                self.assertTrue(all(r.is_zero() for r in modified_cme_residuals(bm)))


class ProportionalityTests(SimpleTestCase):

    def test_ratio(self):
        m = bf_closed(2, 1, None)
        self.assertEqual(proportionality(m.S.scale(3), m.S), 3)

    def test_zero_denominator(self):
        m = bf_closed(2, 1, None)
        self.assertIsNone(proportionality(m.S, GradedPoly.zero(m.table)))
