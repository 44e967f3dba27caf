from django.urls import reverse
from rest_framework import status
from rest_framework.test import APIClient, APITestCase

from harness.models import CheckResult, ExperimentRun


class ExperimentRunAPITest(APITestCase):

    def setUp(self):
        """Set up one passing and one failing recorded run"""
        self.client = APIClient()
        self.good = ExperimentRun.objects.create(
            kind='identities', seed=1, config={'kind': 'identities'}, passed=True,
            check_count=1, failed_count=0, output_dir='runs/identities-seed1',
        )
        CheckResult.objects.create(run=self.good, name='Mehler bound violations', oracle_kind='inequality',
                                   oracle_value=0.0, estimate=0.0, tolerance=0.0, passed=True)
        self.bad = ExperimentRun.objects.create(
            kind='sample', seed=2, config={'kind': 'sample'}, passed=False,
            check_count=2, failed_count=1, output_dir='runs/sample-seed2',
        )
        CheckResult.objects.create(run=self.bad, name='covariance at offset 0', oracle_kind='band covariance grid',
                                   oracle_value=2.9, estimate=3.4, std_error=0.1, tolerance=0.3, passed=False)
        CheckResult.objects.create(run=self.bad, name='band discretization gap', oracle_kind='quadrature',
                                   oracle_value=0.0, estimate=0.01, tolerance=0.05, passed=True, hard=False)

    def test_list_runs(self):
        """Test the run list is paginated and newest first"""
        response = self.client.get(reverse('run-list'))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['count'], 2)
        self.assertEqual(response.data['results'][0]['id'], self.bad.id)
        self.assertEqual(response.data['results'][0]['kind_display'], 'Sampler fidelity')

    def test_filter_runs(self):
        """Test filtering by kind and by pass flag"""
        response = self.client.get(reverse('run-list'), {'kind': 'identities'})
        self.assertEqual([run['id'] for run in response.data['results']], [self.good.id])
        response = self.client.get(reverse('run-list'), {'passed': 'false'})
        self.assertEqual([run['id'] for run in response.data['results']], [self.bad.id])

    def test_run_detail(self):
        """Test the detail view nests every check in order"""
        response = self.client.get(reverse('run-detail', kwargs={'pk': self.bad.id}))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['config'], {'kind': 'sample'})
        names = [check['name'] for check in response.data['checks']]
        self.assertEqual(names, ['covariance at offset 0', 'band discretization gap'])
        self.assertFalse(response.data['checks'][1]['hard'])

    def test_read_only(self):
        """Test the registry rejects writes"""
        response = self.client.post(reverse('run-list'), {'kind': 'sample'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)
        response = self.client.delete(reverse('run-detail', kwargs={'pk': self.good.id}))
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)

    def test_missing_run(self):
        """Test an unknown run id returns 404"""
        response = self.client.get(reverse('run-detail', kwargs={'pk': 9999}))
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)
