from django.test import SimpleTestCase

from verification.algebra import mul
from verification.exceptions import GradingError, ModelParseError
from verification.parser import build, load, parse, render
from verification.services import BF_CYLINDER, VerificationService

MINIMAL = """\
# toy odd Darboux model
model toy
var x ghost 0
var theta ghost -1
pair x theta
symplectic k 0
action x*theta
check cme
"""


class ParseTests(SimpleTestCase):

    def test_minimal_file(self):
        spec = parse(MINIMAL)
        self.assertEqual(spec.model_id, 'toy')
        self.assertEqual(len(spec.variables), 2)
        self.assertEqual(spec.pairs, [('x', 'theta')])
        self.assertEqual(spec.k, 0)
        self.assertEqual(spec.checks, ['cme'])

    def test_missing_trailing_newline(self):
        self.assertEqual(parse(MINIMAL.rstrip('\n')), parse(MINIMAL))

    def test_render_round_trip_of_presets(self):
        for name in VerificationService.presets():
            if name == BF_CYLINDER:
                continue
            with self.subTest(preset=name):
                spec = parse(VerificationService.preset_source(name))
                self.assertEqual(parse(render(spec)), spec)

    def test_product_expansion(self):
        source = MINIMAL.replace('var theta ghost -1', 'var theta ghost -1\nvar y ghost 0')
        source = source.replace('action x*theta', 'action x*(y+theta)^2')
        model = load(source)
        table = model.bv.table
        x, y, theta = table.poly('x'), table.poly('y'), table.poly('theta')
        expected = mul(x, mul(y, y)) + mul(x, mul(y, theta)).scale(2)
        self.assertEqual(model.bv.S, expected)

    def test_decimal_coefficients_are_exact(self):
        model = load(MINIMAL.replace('action x*theta', 'action 0.5*x^2'))
        x = model.bv.table.poly('x')
        self.assertEqual(model.bv.S.scale(2), mul(x, x))

    def test_equivariant_declaration(self):
        spec = parse(MINIMAL + 'equivariant u vector axial\n')
        self.assertEqual(spec.equivariant, 'axial')
        self.assertIn('equivariant u vector axial', render(spec))
        self.assertIsNone(parse(MINIMAL).equivariant)

    def test_imaginary_parameter(self):
        spec = parse('param i relation i^2+1=0\n' + MINIMAL)
        self.assertEqual([p.name for p in spec.params], ['i'])


class ParseErrorTests(SimpleTestCase):

    def test_syntax_error_carries_line(self):
        with self.assertRaises(ModelParseError) as ctx:
            parse("model m\nvar x ghost\n")
        self.assertEqual(ctx.exception.line, 2)
        self.assertIn('line 2', str(ctx.exception))

    def test_pair_grading_error_names_the_line(self):
        source = "model m\nvar x ghost 0\nvar p ghost 0\npair x p\nsymplectic k 0\n"
        with self.assertRaises(GradingError) as ctx:
            parse(source)
        self.assertIn('line 4', str(ctx.exception))
        self.assertIn('pair x p', str(ctx.exception))

    def test_undeclared_name(self):
        with self.assertRaises(ModelParseError):
            parse(MINIMAL.replace('action x*theta', 'action x*z'))

    def test_unknown_pair_member(self):
        with self.assertRaises(ModelParseError):
            parse(MINIMAL.replace('pair x theta', 'pair x nope'))

    def test_unknown_check(self):
        with self.assertRaises(ModelParseError):
            parse(MINIMAL.replace('check cme', 'check everything'))

    def test_unsupported_relation(self):
        with self.assertRaises(ModelParseError):
            parse('param e relation e^2-1=0\n' + MINIMAL)

    def test_bad_equivariant_declaration(self):
        with self.assertRaises(ModelParseError) as ctx:
            parse(MINIMAL + 'equivariant u vector boost\n')
        self.assertEqual(ctx.exception.line, MINIMAL.count('\n') + 1)

    def test_equivariant_parameter_must_be_u(self):
        with self.assertRaises(ModelParseError):
            parse(MINIMAL + 'equivariant v vector rotation\n')


class BuildTests(SimpleTestCase):

    def test_split_preset_builds_split_model(self):
        model = build(parse(VerificationService.preset_source('toy_split')))
        self.assertIsNotNone(model.split)
        self.assertEqual(model.bv.model_id, 'toy_split')

    def test_file_without_polarization_has_no_split(self):
        self.assertIsNone(load(MINIMAL).split)
