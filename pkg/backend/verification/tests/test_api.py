from rest_framework import status
from rest_framework.test import APITestCase

from verification.models import VerificationRun
from verification.services import VerificationService


class CheckEndpointTests(APITestCase):

    def test_preset_check_is_stored(self):
        response = self.client.post('/api/check/', {'preset': 'toy_gauge', 'checks': ['cme']}, format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertTrue(response.data['run']['passed'])
        self.assertEqual(response.data['report']['summary']['pass'], 1)
        self.assertEqual(VerificationRun.objects.count(), 1)

    def test_source_check_reports_failures(self):
        source = VerificationService.preset_source('toy_gauge_broken')
        response = self.client.post('/api/check/', {'source': source}, format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['run']['fail_count'], 2)

    def test_source_and_preset_are_exclusive(self):
        response = self.client.post('/api/check/', {'source': 'model m\n', 'preset': 'toy_gauge'},
                                    format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data['error'], 'Invalid request')

    def test_parse_error(self):
        response = self.client.post('/api/check/', {'source': 'model m\nvar x ghost\n'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertIn('line 2', response.data['details'])

    def test_unknown_preset(self):
        response = self.client.post('/api/check/', {'preset': 'nope'}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)


class BuiltinEndpointTests(APITestCase):

    def test_bf_cylinder(self):
        response = self.client.post('/api/bf-cylinder/', {'segments': 1, 'modes': 0}, format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['run']['kind'], VerificationRun.KIND_BF_CYLINDER)

    def test_bf_cylinder_limits(self):
        response = self.client.post('/api/bf-cylinder/', {'segments': 50}, format='json')
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_property_sweep(self):
        response = self.client.post('/api/properties/', {'kind': 'algebra', 'samples': 3, 'seed': 4},
                                    format='json')
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data['run']['seed'], 4)

    def test_conventions(self):
        response = self.client.get('/api/conventions/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data['ratios']['(S_hat,S_hat)/(u S_L)'], '-2')

    def test_presets_and_health(self):
        self.assertIn('toy_split', self.client.get('/api/presets/').data['presets'])
        self.assertEqual(self.client.get('/api/health/').data['status'], 'healthy')


class RunEndpointTests(APITestCase):

    def setUp(self):
        report = VerificationService.run_preset('toy_gauge_broken')
        self.run = VerificationService.save_run(report, VerificationRun.KIND_FILE, 'toy_gauge_broken',
                                                source='model toy_gauge_broken\n')

    def test_list(self):
        response = self.client.get('/api/runs/')
        self.assertEqual(response.data['count'], 1)
        self.assertEqual(response.data['runs'][0]['model_id'], 'toy_gauge_broken')

    def test_detail_has_entries_in_order(self):
        response = self.client.get(f'/api/runs/{self.run.id}/')
        self.assertEqual([e['check_id'] for e in response.data['entries']], ['cme', 'qme'])

    def test_pdf(self):
        response = self.client.get(f'/api/runs/{self.run.id}/pdf/')
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response['Content-Type'], 'application/pdf')
        self.assertTrue(response.content.startswith(b'%PDF'))

    def test_delete(self):
        response = self.client.delete(f'/api/runs/{self.run.id}/')
        self.assertEqual(response.status_code, status.HTTP_204_NO_CONTENT)
        self.assertEqual(self.client.get(f'/api/runs/{self.run.id}/').status_code, status.HTTP_404_NOT_FOUND)
