import io
import json
import math
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from gmc_lab.exceptions import LabError
from harness.reports import (
    CHECK_COLUMNS,
    REPORT_FILES,
    REPORT_FORMATS,
    CheckRow,
    RunReport,
    emit_report,
    load_report,
    quantize,
    write_checks_csv,
)


class ReportTest(SimpleTestCase):

    def setUp(self):
        """Set up a report with a hard pass, a soft miss and a hard failure"""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.report = RunReport(
            kind='gmc-moments',
            seed=7,
            config={'kind': 'gmc-moments', 'seed': 7, 'eps_schedule': [4.0], 'gamma_hat': None},
            checks=(
                CheckRow('mean k=0', 'mean oracle', 0.5, 0.5012345678901234, 0.001, 0.003, True),
                CheckRow('trend', 'monotone trend', 0.0, -0.1, 0.05, 0.05, False, hard=False),
                CheckRow('second moment k=1', 'double-sum oracle', 1.0 / 3.0, 0.2, 0.01, 0.04, False,
                         reproduce='python manage.py run_experiment gmc-moments --seed 7'),
            ),
        )

    def test_quantized_floats(self):
        """Test row floats are held at 12 significant digits"""
        self.assertEqual(self.report.checks[0].estimate, 0.501234567890)
        self.assertEqual(quantize(1.0 / 3.0), 0.333333333333)
        self.assertIsNone(quantize(None))
        self.assertTrue(math.isinf(quantize(math.inf)))

    def test_pass_flag_ignores_soft_checks(self):
        """Test only hard failures fail the report"""
        self.assertFalse(self.report.passed)
        self.assertEqual([row.name for row in self.report.failed_checks], ['second moment k=1'])
        soft_only = RunReport('sample', 1, {}, self.report.checks[:2])
        self.assertTrue(soft_only.passed)

    def test_json_round_trip(self):
        """Test the JSON report parses back to an equal report"""
        path = emit_report(self.report, 'json', self.tmp.name)
        self.assertEqual(load_report(path), self.report)
        data = json.loads(path.read_text())
        self.assertEqual(list(data), sorted(data))
        self.assertFalse(data['passed'])

    def test_csv_row_count(self):
        """Test the CSV holds one row per check under the column header"""
        stream = io.StringIO()
        self.assertEqual(write_checks_csv(stream, self.report), 3)
        lines = stream.getvalue().splitlines()
        self.assertEqual(lines[0], ','.join(CHECK_COLUMNS))
        self.assertEqual(len(lines), 4)
        self.assertTrue(lines[1].startswith('mean k=0,mean oracle,0.5,0.50123456789,0.001,0.003,true,true'))

    def test_markdown_summary(self):
        """Test the summary marks hard failures and soft misses differently"""
        text = emit_report(self.report, 'markdown', self.tmp.name).read_text()
        self.assertIn('FAILED (1 hard checks)', text)
        self.assertIn('| FAIL |', text)
        self.assertIn('fail (soft)', text)

    def test_identical_reports_identical_bytes(self):
        """Test emitting equal reports twice gives byte-identical files"""
        first, second = Path(self.tmp.name, 'a'), Path(self.tmp.name, 'b')
        for fmt in REPORT_FORMATS:
            emit_report(self.report, fmt, first)
            emit_report(RunReport.from_dict(self.report.to_dict()), fmt, second)
            name = REPORT_FILES[fmt]
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes())

    def test_unwritable_directory(self):
        """Test a directory path blocked by a file raises LabError"""
        blocker = Path(self.tmp.name, 'blocker')
        blocker.write_text('x')
        with self.assertRaises(LabError):
            emit_report(self.report, 'csv', blocker / 'out')

    def test_unknown_format(self):
        """Test an unknown format raises LabError"""
        with self.assertRaises(LabError):
            emit_report(self.report, 'xml', self.tmp.name)

    def test_metadata_round_trip(self):
        """Test run metadata survives the JSON report and is listed in the summary"""
        report = RunReport.from_dict(dict(self.report.to_dict(),
                                          metadata={'tail_variance_bound': {'0.0497870683679': 0.0183156388887}}))
        path = emit_report(report, 'json', self.tmp.name)
        self.assertEqual(load_report(path).metadata, report.metadata)
        text = emit_report(report, 'markdown', self.tmp.name).read_text()
        self.assertIn('## Metadata', text)
        self.assertIn('tail_variance_bound', text)
        self.assertNotIn('## Metadata', emit_report(self.report, 'markdown', Path(self.tmp.name, 'bare')).read_text())
