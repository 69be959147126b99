from django.test import SimpleTestCase

from verification.properties import SAMPLERS, PolynomialSampler, property_suite, toy_structure


class SamplerTests(SimpleTestCase):

    def test_draws_are_homogeneous(self):
        sampler = PolynomialSampler(toy_structure(), seed=3)
        for ghost in (-2, -1, 0, 1):
            poly = sampler.draw(ghost)
            if not poly.is_zero():
                self.assertEqual(poly.ghost_number(), ghost)

    def test_same_seed_same_polynomials(self):
        D = toy_structure()
        first = [PolynomialSampler(D, seed=7).draw(0).render() for _ in range(3)]
        second = [PolynomialSampler(D, seed=7).draw(0).render() for _ in range(3)]
        self.assertEqual(first, second)

    def test_laplace_free_pool_avoids_conjugate_pairs(self):
        D = toy_structure()
        sampler = PolynomialSampler(D, seed=0)
        variables = list(D.table)
        index = {D.table.key(v): i for i, v in enumerate(variables)}
        for exps in sampler.exponents(0, laplace_free=True):
            for base, momentum in D.key_pairs():
                self.assertFalse(exps[index[base]] and exps[index[momentum]])


class SuiteTests(SimpleTestCase):

    def test_every_sweep_passes(self):
        entries = property_suite('all', samples=5, seed=11)
        self.assertEqual([e.check_id for e in entries], [f"property_{k}" for k in SAMPLERS])
        for entry in entries:
            with self.subTest(sweep=entry.check_id):
                self.assertTrue(entry.passed, entry.residual)
                self.assertEqual(entry.model_id, 'random_seed11')
                self.assertEqual(entry.details, {'samples': '5', 'seed': '11'})

    def test_unknown_sweep(self):
        with self.assertRaises(ValueError):
            property_suite('geometry')
