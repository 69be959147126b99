import json

from django.test import SimpleTestCase

from verification.algebra import GradedPoly, VariableTable
from verification.report import (
    CheckEntry, Report, Status, emit, entry_from_residual, skipped,
)


class EntryTests(SimpleTestCase):

    def setUp(self):
        self.table = VariableTable('r')
        self.table.declare('x', 0)

    def test_zero_residual_passes(self):
        entry = entry_from_residual('cme', 'm', GradedPoly.zero(self.table))
        self.assertEqual(entry.status, Status.PASS)
        self.assertEqual(entry.residual, '')

    def test_nonzero_residual_fails(self):
        entry = entry_from_residual('cme', 'm', [GradedPoly.zero(self.table), self.table.poly('x')])
        self.assertEqual(entry.status, Status.FAIL)
        self.assertEqual(entry.residual, 'x')

    def test_skipped_carries_reason(self):
        entry = skipped('quantum', 'm', 'not polarised')
        self.assertEqual(entry.status, Status.SKIPPED)
        self.assertEqual(entry.details, {'reason': 'not polarised'})


class ReportTests(SimpleTestCase):

    def make(self, *statuses):
        return Report(CheckEntry(f"c{i}", 'm', s, wall_time=0.5) for i, s in enumerate(statuses))

    def test_empty_report(self):
        report = Report()
        self.assertEqual(report.exit_code, 0)
        self.assertEqual(emit(report), 'check  model  status  residual  anchor\n')
        self.assertEqual(json.loads(emit(report, 'json'))['summary']['total'], 0)

    def test_exit_code_follows_failures(self):
        self.assertEqual(self.make(Status.PASS, Status.SKIPPED).exit_code, 0)
        self.assertEqual(self.make(Status.PASS, Status.FAIL).exit_code, 1)

    def test_counts(self):
        report = self.make(Status.PASS, Status.FAIL, Status.SKIPPED, Status.PASS)
        self.assertEqual(report.counts(), {'pass': 2, 'fail': 1, 'skipped': 1})
        self.assertEqual([e.check_id for e in report.failed], ['c1'])

    def test_json_excludes_wall_time_by_default(self):
        report = self.make(Status.PASS)
        entry = json.loads(emit(report, 'json'))['entries'][0]
        self.assertNotIn('wall_time', entry)
        timed = json.loads(emit(report, 'json', include_timing=True))['entries'][0]
        self.assertEqual(timed['wall_time'], 0.5)

    def test_emission_is_deterministic(self):
        first = self.make(Status.PASS, Status.FAIL)
        second = self.make(Status.PASS, Status.FAIL)
        second.entries[0].wall_time = 9.0
        for fmt in ('human', 'json'):
            self.assertEqual(emit(first, fmt), emit(second, fmt))

    def test_dict_round_trip(self):
        report = self.make(Status.PASS, Status.FAIL)
        self.assertEqual(Report.from_dict(report.to_dict()).to_dict(), report.to_dict())

    def test_human_footer(self):
        text = emit(self.make(Status.PASS, Status.FAIL))
        self.assertTrue(text.endswith('pass=1 fail=1 skipped=0\n'))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit(Report(), 'yaml')

    def test_timed_block_stamps_entries(self):
        report = Report()
        with report.timed() as bucket:
            bucket.append(CheckEntry('c', 'm', Status.PASS))
        self.assertEqual(len(report), 1)
        self.assertGreaterEqual(report.entries[0].wall_time, 0.0)
