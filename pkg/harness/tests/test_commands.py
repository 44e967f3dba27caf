import io
import json
import tempfile
from pathlib import Path
from unittest import mock

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase

from harness.models import CheckResult, ExperimentRun
from harness.reports import REPORT_FILES, CheckRow, load_report


def _failing_experiment(ctx):
    return [
        CheckRow('always fails', 'test oracle', 1.0, 2.0, None, 0.5, False, reproduce=ctx.reproduce),
        CheckRow('always passes', 'test oracle', 1.0, 1.0, None, 0.5, True, reproduce=ctx.reproduce),
    ]


class RunExperimentCommandTest(TestCase):

    def setUp(self):
        """Set up a scratch directory for configurations and reports"""
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.root = Path(self.tmp.name)

    def write_config(self, name, data):
        path = self.root / name
        path.write_text(json.dumps(data))
        return path

    def call(self, *args):
        stdout = io.StringIO()
        call_command('run_experiment', *args, stdout=stdout)
        return stdout.getvalue()

    def test_identities_run(self):
        """Test an identities run writes every artifact and records its checks"""
        out = self.root / 'identities'
        output = self.call('identities', '--out', str(out), '--seed', '9')
        self.assertIn('checks passed', output)
        for name in list(REPORT_FILES.values()) + ['config.json']:
            self.assertTrue((out / name).exists(), name)

        run = ExperimentRun.objects.get()
        self.assertTrue(run.passed)
        self.assertEqual(run.seed, 9)
        self.assertEqual(run.output_dir, str(out))
        self.assertEqual(run.checks.count(), run.check_count)
        report = load_report(out / REPORT_FILES['json'])
        self.assertEqual(len(report.checks), run.check_count)
        self.assertIn('--config <out>/config.json --seed 9', report.checks[0].reproduce)
        recorded = run.checks.first().reproduce
        self.assertIn(f"--config {out}/config.json --seed 9", recorded)

    def test_rerun_is_byte_identical(self):
        """Test re-running the same configuration reproduces the report bytes"""
        out = self.root / 'repeat'
        self.call('identities', '--out', str(out), '--seed', '2')
        first = {name: (out / name).read_bytes() for name in REPORT_FILES.values()}
        self.call('identities', '--config', str(out / 'config.json'))
        for name, content in first.items():
            self.assertEqual((out / name).read_bytes(), content, name)
        self.assertEqual(ExperimentRun.objects.count(), 2)

    def test_reports_independent_of_output_dir(self):
        """Test the same run written to two output directories gives the same report bytes"""
        first, second = self.root / 'a', self.root / 'elsewhere' / 'b'
        self.call('identities', '--out', str(first), '--seed', '5')
        self.call('identities', '--out', str(second), '--seed', '5')
        for name in REPORT_FILES.values():
            self.assertEqual((first / name).read_bytes(), (second / name).read_bytes(), name)

    def test_config_file_and_overrides(self):
        """Test flags override values read from the configuration file"""
        path = self.write_config('toy.json', {'kind': 'toy-martingale', 'replicas': 10_000, 'seed': 1,
                                              't_schedule': [2.0, 3.0]})
        out = self.root / 'toy'
        try:
            self.call('toy-martingale', '--config', str(path), '--seed', '4', '--out', str(out))
        except CommandError:
            # a 3 SE band may legitimately miss; the run is still recorded
            pass
        run = ExperimentRun.objects.get()
        self.assertEqual(run.seed, 4)
        self.assertEqual(run.config['replicas'], 10_000)
        self.assertEqual(run.config['t_schedule'], [2.0, 3.0])
        self.assertNotIn('out', run.config)

    def test_empty_schedule_rejected(self):
        """Test an empty schedule fails with the invariant named"""
        path = self.write_config('bad.json', {'eps_schedule': []})
        with self.assertRaisesMessage(CommandError, 'eps_schedule'):
            self.call('gmc-moments', '--config', str(path))
        self.assertFalse(ExperimentRun.objects.exists())

    def test_unknown_key_rejected(self):
        """Test an unknown configuration key is reported by name"""
        path = self.write_config('typo.json', {'replicaz': 10})
        with self.assertRaisesMessage(CommandError, 'replicaz'):
            self.call('sample', '--config', str(path))

    def test_kind_mismatch_rejected(self):
        """Test a configuration written for another kind is refused"""
        path = self.write_config('other.json', {'kind': 'sample'})
        with self.assertRaisesMessage(CommandError, 'sample'):
            self.call('thickness', '--config', str(path))

    def test_unreadable_config(self):
        """Test missing and malformed configuration files raise CommandError"""
        with self.assertRaises(CommandError):
            self.call('sample', '--config', str(self.root / 'missing.json'))
        broken = self.root / 'broken.json'
        broken.write_text('{"kind": ')
        with self.assertRaisesMessage(CommandError, 'not valid JSON'):
            self.call('sample', '--config', str(broken))

    def test_lab_error_becomes_command_error(self):
        """Test a precondition failure inside an experiment exits through CommandError"""
        path = self.write_config('frac.json', {'points': 256, 't_max': 4.0, 'eps_schedule': [3.5], 'replicas': 2})
        with self.assertRaisesMessage(CommandError, 'integer epsilon depth'):
            self.call('badmass', '--config', str(path), '--out', str(self.root / 'frac'))

    def test_hard_failure_exits_nonzero(self):
        """Test a failed hard check raises CommandError after recording the run"""
        with mock.patch.dict('harness.experiments.EXPERIMENTS', {'sample': _failing_experiment}):
            with self.assertRaisesMessage(CommandError, '1 of 2 hard checks failed'):
                self.call('sample', '--out', str(self.root / 'fail'))
        run = ExperimentRun.objects.get()
        self.assertFalse(run.passed)
        self.assertEqual(run.failed_count, 1)
        self.assertEqual(CheckResult.objects.filter(run=run, passed=False).count(), 1)
