from django.test import TestCase

from harness.models import CheckResult, ExperimentRun


class ExperimentRunModelTest(TestCase):

    def setUp(self):
        """Set up a recorded run with two checks"""
        self.run = ExperimentRun.objects.create(
            kind='badmass', seed=12, config={'kind': 'badmass', 'seed': 12}, passed=False,
            check_count=2, failed_count=1, output_dir='runs/badmass-seed12',
        )
        CheckResult.objects.create(run=self.run, name='split reassembly defect', oracle_kind='I_good + I_bad = I',
                                   oracle_value=0.0, estimate=3e-16, tolerance=1e-12, passed=True)
        CheckResult.objects.create(run=self.run, name='partition exactness failures', oracle_kind='exact partition',
                                   oracle_value=0.0, estimate=1.0, tolerance=0.0, passed=False)

    def test_str(self):
        """Test the run and check string forms"""
        self.assertEqual(str(self.run), 'badmass run (seed 12): 2 checks, 1 failed')
        self.assertEqual(str(self.run.checks.last()), 'partition exactness failures: FAIL')

    def test_checks_cascade(self):
        """Test deleting a run removes its checks"""
        self.run.delete()
        self.assertFalse(CheckResult.objects.exists())

    def test_large_seed(self):
        """Test seeds up to 2^63 - 1 are stored"""
        run = ExperimentRun.objects.create(kind='sample', seed=(1 << 63) - 1, config={}, output_dir='x')
        run.refresh_from_db()
        self.assertEqual(run.seed, (1 << 63) - 1)
