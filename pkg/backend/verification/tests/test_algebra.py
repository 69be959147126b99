import sympy
from django.test import SimpleTestCase
from hypothesis import given, settings

from verification.algebra import (
    HBAR, U, GradedPoly, Parameter, VariableTable, ghost_number, left_derivative, mul,
    right_derivative, substitute,
)
from verification.exceptions import GradingError, StructureError

from .strategies import TABLE, homogeneous


def sign(parity):
    return -1 if parity % 2 else 1


class VariableTableTests(SimpleTestCase):

    def setUp(self):
        self.table = VariableTable('t')
        self.x = self.table.declare('x', 0)
        self.theta = self.table.declare('theta', -1)
        self.A = self.table.declare('A', 0, formdeg=1)

    def test_parity_is_ghost_plus_form_degree(self):
        self.assertEqual(self.x.parity, 0)
        self.assertEqual(self.theta.parity, 1)
        self.assertEqual(self.A.parity, 1)

    def test_duplicate_declaration_rejected(self):
        with self.assertRaises(GradingError):
            self.table.declare('x', 1)

    def test_negative_form_degree_rejected(self):
        with self.assertRaises(GradingError):
            self.table.declare('y', 0, formdeg=-1)

    def test_unknown_name(self):
        with self.assertRaises(StructureError):
            self.table['nope']

    def test_delta_symbol_has_opposite_parity(self):
        self.assertEqual(self.table.delta(self.x).parity, 1)
        self.assertEqual(self.table.delta(self.theta).parity, 0)
        self.assertEqual(self.table.key('δx'), (1, 0))


class GradedPolyTests(SimpleTestCase):

    def setUp(self):
        self.table = VariableTable('t')
        self.table.declare('x', 0)
        self.table.declare('theta', -1)
        self.table.declare('c', 1)
        self.x = self.table.poly('x')
        self.theta = self.table.poly('theta')
        self.c = self.table.poly('c')

    def test_odd_square_vanishes(self):
        self.assertTrue(mul(self.theta, self.theta).is_zero())

    def test_odd_variables_anticommute(self):
        self.assertEqual(mul(self.theta, self.c), -mul(self.c, self.theta))

    def test_even_power_expands(self):
        f = (self.x + self.theta) ** 2
        self.assertEqual(f, mul(self.x, self.x) + mul(self.x, self.theta).scale(2))

    def test_ghost_number(self):
        self.assertEqual(mul(self.theta, self.c).ghost_number(), 0)
        self.assertEqual((self.x + self.c).ghost_number(), 'inhomogeneous')
        zero_ghost = GradedPoly.zero(self.table).ghost_number()
        self.assertEqual(str(zero_ghost), 'any')
        self.assertEqual(zero_ghost, 0)
        self.assertEqual(zero_ghost, -3)
        self.assertNotEqual(zero_ghost, 'any')
        self.assertEqual(ghost_number(self.c), 1)

    def test_parameter_u_carries_ghost_two(self):
        f = mul(self.theta, self.theta + self.x).scale(U)
        self.assertEqual(f.ghost_number(), 1)

    def test_truncate_in_parameter(self):
        f = self.x.scale(1 + HBAR + HBAR ** 2)
        self.assertEqual(f.truncate(HBAR, 1), self.x.scale(1 + HBAR))

    def test_left_derivative_sign(self):
        f = mul(self.c, self.theta)
        self.assertEqual(left_derivative(f, self.table.key('theta')), -self.c)
        self.assertEqual(left_derivative(f, self.table.key('c')), self.theta)

    def test_right_derivative_sign(self):
        f = mul(self.c, self.theta)
        self.assertEqual(right_derivative(f, self.table.key('theta')), self.c)

    def test_substitution_respects_grading(self):
        f = mul(self.x, self.theta)
        result = substitute(f, {'x': self.x + 1})
        self.assertEqual(result, mul(self.x, self.theta) + self.theta)
        with self.assertRaises(GradingError):
            substitute(f, {'x': self.theta})

    def test_mixing_tables_rejected(self):
        other = VariableTable('other')
        other.declare('x', 0)
        with self.assertRaises(StructureError):
            self.x + other.poly('x')

    def test_render_is_sorted_and_exact(self):
        f = self.x.scale(sympy.Rational(1, 2)) + mul(self.x, self.theta)
        self.assertEqual(f.render(), '(1/2)*x + x*theta')


class AlgebraLawTests(SimpleTestCase):

    @settings(max_examples=60, deadline=None)
    @given(homogeneous(), homogeneous(), homogeneous())
    def test_associativity(self, f, g, h):
        (f, _), (g, _), (h, _) = f, g, h
        self.assertTrue((mul(mul(f, g), h) - mul(f, mul(g, h))).is_zero())

    @settings(max_examples=60, deadline=None)
    @given(homogeneous(), homogeneous())
    def test_graded_commutativity(self, f, g):
        (f, gf), (g, gg) = f, g
        self.assertEqual(mul(f, g), mul(g, f).scale(sign(gf * gg)))

    @settings(max_examples=40, deadline=None)
    @given(homogeneous(), homogeneous())
    def test_leibniz_rule(self, f, g):
        (f, gf), (g, _) = f, g
        for var in TABLE:
            key = TABLE.key(var)
            expected = mul(left_derivative(f, key), g) + mul(f, left_derivative(g, key)).scale(
                sign(var.parity * gf))
            self.assertEqual(left_derivative(mul(f, g), key), expected)

    @settings(max_examples=30, deadline=None)
    @given(homogeneous(), homogeneous(), homogeneous(ghost=0, max_terms=2), homogeneous(ghost=1, max_terms=2))
    def test_substitution_is_multiplicative(self, f, g, x_value, c_value):
        (f, _), (g, _) = f, g
        bindings = {'x': x_value[0], 'c': c_value[0]}
        self.assertEqual(
            substitute(mul(f, g), bindings),
            mul(substitute(f, bindings), substitute(g, bindings)),
        )

    @settings(max_examples=40, deadline=None)
    @given(homogeneous())
    def test_derivatives_graded_commute(self, fg):
        f, _ = fg
        for v in TABLE:
            for w in TABLE:
                kv, kw = TABLE.key(v), TABLE.key(w)
                lhs = left_derivative(left_derivative(f, kw), kv)
                rhs = left_derivative(left_derivative(f, kv), kw).scale(sign(v.parity * w.parity))
                self.assertEqual(lhs, rhs)


class ParameterTests(SimpleTestCase):

    def test_imaginary_unit(self):
        self.assertEqual(Parameter('i', 0, 'i^2+1=0').symbol, sympy.I)
        self.assertEqual(Parameter('j', 0, 'j^2=-1').symbol, sympy.I)

    def test_free_parameter_is_a_symbol(self):
        self.assertEqual(Parameter('hbar').symbol, sympy.Symbol('hbar'))

    def test_other_relations_rejected(self):
        for relation in ('e^2-1=0', 'e=0', 'e^3+1=0'):
            with self.subTest(relation=relation):
                with self.assertRaises(StructureError):
                    Parameter('e', 0, relation).symbol
