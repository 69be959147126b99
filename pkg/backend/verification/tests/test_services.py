from django.test import SimpleTestCase, TestCase, override_settings

from verification.exceptions import StructureError
from verification.models import CheckRecord, VerificationRun
from verification.report import Status
from verification.services import BF_CYLINDER, VerificationService


def statuses(report):
    return {e.check_id: e.status for e in report}


class ModelFileRunTests(SimpleTestCase):

    def test_expand_all_keeps_order_without_duplicates(self):
        names = VerificationService.expand_checks(['qme', 'all'])
        self.assertEqual(names[0], 'qme')
        self.assertNotIn('all', names)
        self.assertEqual(len(names), len(set(names)))

    def test_unknown_check(self):
        with self.assertRaises(ValueError):
            VerificationService.expand_checks(['nope'])

    def test_gauge_preset_passes_everything(self):
        report = VerificationService.run_preset('toy_gauge')
        self.assertEqual(report.exit_code, 0)
        result = statuses(report)
        self.assertEqual(result['cme'], Status.PASS)
        self.assertEqual(result['summary'], Status.PASS)
        self.assertEqual(result['mcme'], Status.PASS)
        self.assertEqual(result['quantum'], Status.SKIPPED)
        self.assertEqual(result['split'], Status.SKIPPED)
        self.assertEqual(result['equivariant'], Status.SKIPPED)

    def test_broken_preset_fails(self):
        report = VerificationService.run_preset('toy_gauge_broken')
        self.assertEqual(report.exit_code, 1)
        self.assertEqual([e.check_id for e in report.failed], ['cme', 'qme'])

    def test_requested_checks_override_file(self):
        report = VerificationService.run_preset('toy_gauge_broken', ['lemma_chain'])
        self.assertEqual([e.check_id for e in report], ['lemma_chain'])
        self.assertEqual(report.exit_code, 0)

    def test_split_preset(self):
        report = VerificationService.run_preset('toy_split')
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(len(report), 7)

    def test_equivariant_preset(self):
        report = VerificationService.run_preset('toy_equivariant')
        self.assertEqual(report.exit_code, 0)
        self.assertEqual([e.check_id for e in report], ['equivariant', 'lemma_chain', 'weak_bv'])

    def test_laplacian_divergence_entry(self):
        report = VerificationService.run_preset('toy_xy_theta', ['laplacian_divergence'])
        self.assertTrue(report.entries[0].passed)

    def test_unknown_preset(self):
        with self.assertRaises(StructureError):
            VerificationService.preset_source('nope')

    def test_presets_include_builtin(self):
        presets = VerificationService.presets()
        self.assertIn('toy_gauge', presets)
        self.assertEqual(presets[-1], BF_CYLINDER)


class BfCylinderRunTests(SimpleTestCase):

    def test_rotation_grid(self):
        report = VerificationService.run_bf_cylinder(segments=2, modes=0)
        self.assertEqual(report.exit_code, 0, [e.check_id for e in report.failed])
        summaries = report.find('summary')
        self.assertEqual([e.status for e in summaries], [Status.PASS, Status.PASS])
        self.assertTrue(all(e.passed for e in report.find('mcme')))
        self.assertTrue(all(e.passed for e in report.find('hodge')))

    def test_axial_skips_boundary_reduction(self):
        report = VerificationService.run_bf_cylinder(segments=2, modes=0, vector='axial')
        self.assertEqual(report.find('tangency')[-1].status, Status.FAIL)
        self.assertTrue(all(e.status == Status.SKIPPED for e in report.find('summary')))
        self.assertEqual(report.exit_code, 1)

    def test_invalid_grid(self):
        with self.assertRaises(ValueError):
            VerificationService.run_bf_cylinder(segments=0)
        with self.assertRaises(ValueError):
            VerificationService.run_bf_cylinder(vector='boost')


class ConventionsTests(SimpleTestCase):

    def test_ratios(self):
        data = VerificationService.conventions()
        self.assertEqual(data['ratios']['T/(u S_L)'], '-1')
        self.assertEqual(data['ratios']['(S_hat,S_hat)/(u S_L)'], '-2')
        self.assertIn('laplacian', [row['name'] for row in data['signs']])


class PropertyRunTests(SimpleTestCase):

    @override_settings(WORKBENCH={'DEFAULT_SEED': 5})
    def test_default_seed_from_settings(self):
        report = VerificationService.run_properties('algebra', samples=3)
        self.assertEqual(report.entries[0].model_id, 'random_seed5')
        self.assertEqual(report.exit_code, 0)


class PersistenceTests(TestCase):

    def test_save_run_stores_entries_in_order(self):
        report = VerificationService.run_preset('toy_gauge_broken')
        run = VerificationService.save_run(report, VerificationRun.KIND_FILE, 'toy_gauge_broken')
        self.assertEqual(run.fail_count, 2)
        self.assertFalse(run.passed)
        records = list(CheckRecord.objects.filter(run=run).order_by('position'))
        self.assertEqual([r.check_id for r in records], ['cme', 'qme'])
        self.assertEqual(run.report['summary']['exit_status'], 1)

    @override_settings(WORKBENCH={'MAX_RUNS_RETAINED': 2})
    def test_retention_limit(self):
        report = VerificationService.run_preset('toy_gauge_broken', ['cme'])
        for _ in range(3):
            VerificationService.save_run(report, VerificationRun.KIND_FILE, 'toy_gauge_broken')
        self.assertEqual(VerificationRun.objects.count(), 2)

    def test_run_summary(self):
        run = VerificationService.save_run(
            VerificationService.run_preset('toy_gauge', ['cme']), VerificationRun.KIND_FILE, 'toy_gauge')
        summary = VerificationService.get_run_summary(run)
        self.assertTrue(summary['passed'])
        self.assertEqual(summary['pass'], 1)
