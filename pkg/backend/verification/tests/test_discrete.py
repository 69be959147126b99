import sympy
from django.test import SimpleTestCase

from verification.discrete import (
    AXIAL, ROTATION, build_closed_mode_complex, build_cylinder_mode_complex,
    build_dual_mode_complex, build_interval_complex, contraction, dual_of, hodge,
    stokes_residual,
)
from verification.exceptions import StructureError


class ComplexTests(SimpleTestCase):

    def test_d_squared_vanishes(self):
        builders = (build_cylinder_mode_complex, build_dual_mode_complex, build_closed_mode_complex)
        for build in builders:
            for n in (-1, 0, 2):
                with self.subTest(builder=build.__name__, n=n):
                    X = build(3, n)
                    self.assertTrue(all(m.is_zero_matrix for m in X.d_squared()))

    def test_cylinder_dimensions(self):
        X = build_cylinder_mode_complex(2, 1)
        self.assertEqual(X.dims, (3, 5, 2))
        self.assertEqual(X.labels(0), ['n0', 'n1', 'n2'])

    def test_dual_pairs_with_opposite_mode(self):
        Y = dual_of(build_cylinder_mode_complex(2, 1))
        self.assertEqual(Y.mode, -1)
        self.assertEqual(Y.dims, (2, 5, 3))

    def test_resolution_must_be_positive(self):
        with self.assertRaises(StructureError):
            build_cylinder_mode_complex(0, 1)
        with self.assertRaises(StructureError):
            build_interval_complex(0)

    def test_interval_has_no_dual(self):
        with self.assertRaises(StructureError):
            dual_of(build_interval_complex(2))


class StokesTests(SimpleTestCase):

    def test_closed_complex_has_no_boundary_term(self):
        X = build_closed_mode_complex(3, 1)
        self.assertTrue(stokes_residual(dual_of(X), X, 0).is_zero_matrix)

    def test_cylinder_boundary_term_sits_on_the_end_circles(self):
        K = 3
        X = build_cylinder_mode_complex(K, 1)
        residual = stokes_residual(dual_of(X), X, 0)
        expected = sympy.zeros(K, 2 * K + 1)
        expected[0, K] = -1
        expected[K - 1, 2 * K] = 1
        self.assertEqual(residual, expected)


class ContractionTests(SimpleTestCase):

    def test_contraction_squares_to_zero(self):
        X = build_cylinder_mode_complex(2, 1)
        for kind in (ROTATION, AXIAL):
            with self.subTest(kind=kind):
                self.assertTrue(all(m.is_zero_matrix for m in contraction(kind, X).iota_squared()))

    def test_unknown_kind(self):
        with self.assertRaises(StructureError):
            contraction('boost', build_cylinder_mode_complex(2, 1))

    def test_interval_block_has_no_vector_field(self):
        with self.assertRaises(StructureError):
            contraction(ROTATION, build_interval_complex(2))


class HodgeTests(SimpleTestCase):

    def test_cylinder_defaults_to_metric_gauge(self):
        hd = hodge(build_cylinder_mode_complex(2, 1))
        self.assertEqual(hd.gauge, 'metric')
        self.assertEqual(hd.harmonic_dims(), (0, 0, 0))
        self.assertTrue(hd.verified())

    def test_metric_propagator_squares_to_zero(self):
        hd = hodge(build_cylinder_mode_complex(3, 1))
        self.assertTrue((hd.eta[1] * hd.eta[2]).applyfunc(sympy.simplify).is_zero_matrix)

    def test_product_gauge_on_request(self):
        for n in (0, 1):
            with self.subTest(n=n):
                hd = hodge(build_cylinder_mode_complex(2, n), gauge=AXIAL)
                self.assertEqual(hd.gauge, AXIAL)
                self.assertTrue(hd.verified())

    def test_product_gauge_needs_acyclic_interval(self):
        with self.assertRaises(StructureError):
            hodge(build_cylinder_mode_complex(2, 1), ('absolute', 'absolute'), gauge=AXIAL)
        with self.assertRaises(StructureError):
            hodge(build_closed_mode_complex(2, 1), gauge=AXIAL)

    def test_unknown_gauge(self):
        with self.assertRaises(StructureError):
            hodge(build_cylinder_mode_complex(2, 1), gauge='coulomb')

    def test_closed_complex_uses_metric_gauge(self):
        hd = hodge(build_closed_mode_complex(2, 0))
        self.assertEqual(hd.gauge, 'metric')
        self.assertTrue(hd.verified())
        self.assertEqual(hd.harmonic_dims(), (1, 2, 1))

    def test_closed_nonzero_mode_is_acyclic(self):
        hd = hodge(build_closed_mode_complex(2, 1))
        self.assertEqual(hd.harmonic_dims(), (0, 0, 0))
        self.assertTrue(hd.verified())

    def test_unknown_boundary_condition(self):
        with self.assertRaises(StructureError):
            hodge(build_cylinder_mode_complex(2, 1), ('relative', 'mixed'))
