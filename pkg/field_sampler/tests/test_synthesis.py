import math

import numpy as np
from django.test import SimpleTestCase

from gmc_lab.exceptions import ParameterError
from field_sampler.bands import band_covariance_grid, realized_variance
from field_sampler.grid import GridSpec
from field_sampler.regularization import (
    Mollified,
    Truncated,
    TAIL_MARGIN,
    TruncatedMollified,
    check_tail_margin,
    field_at,
    mollified_covariance_grid,
    mollify,
    regularized_variance,
    tail_variance_bound,
)
from field_sampler.statistics import cross_layer_cov, empirical_cov, moment_check
from field_sampler.streams import split_seed
from field_sampler.synthesis import CLIP_BUDGET, FieldSynthesizer, sample_field
from kernels.covariance import sigma_sq
from kernels.seed import FieldParams, build_seed

REPLICAS = 600
SE_BAND = 4.0


def draw(synthesizer, count=REPLICAS, base_seed=11):
    return [synthesizer.sample(split_seed(base_seed, i)) for i in range(count)]


class SampleFieldTest(SimpleTestCase):

    def setUp(self):
        """Set up a one-dimensional pure star-scale field"""
        self.seed = build_seed(1, 4096)
        self.params = FieldParams(dim=1, alpha=1.0, frak_a=0.0, seed=self.seed)
        self.grid = GridSpec(dim=1, points_per_dim=256)

    def test_reproducible_from_seed(self):
        """Test identical inputs give bit-identical samples"""
        first = sample_field(self.params, self.grid, 4.0, 0.25, 1)
        second = sample_field(self.params, self.grid, 4.0, 0.25, 1)
        np.testing.assert_array_equal(first.layers, second.layers)
        other = sample_field(self.params, self.grid, 4.0, 0.25, 2)
        self.assertFalse(np.array_equal(first.layers, other.layers))

    def test_zero_depth_is_zero_field(self):
        """Test t_max = 0 yields an identically zero field"""
        sample = sample_field(self.params, self.grid, 0.0, 0.25, 1)
        self.assertEqual(len(sample.bands), 0)
        np.testing.assert_array_equal(sample.full, np.zeros(256))

    def test_truncation_sums_layers(self):
        """Test X_t is the sum of the layers below t and X_{t_max} is the stored sum"""
        sample = sample_field(self.params, self.grid, 4.0, 0.25, 3)
        np.testing.assert_array_equal(sample.truncated(4.0), sample.cumulative[-1])
        np.testing.assert_allclose(sample.truncated(2.0), sample.layers[:8].sum(axis=0), atol=1e-12)
        np.testing.assert_array_equal(sample.truncated(0.0), np.zeros(256))
        with self.assertRaises(ParameterError):
            sample.truncated(4.5)

    def test_layers_read_only(self):
        """Test stored layers cannot be modified"""
        sample = sample_field(self.params, self.grid, 1.0, 0.25, 3)
        with self.assertRaises(ValueError):
            sample.layers[0, 0] = 1.0

    def test_clip_mass_within_budget(self):
        """Test the clipped spectral mass stays inside its budget"""
        synthesizer = FieldSynthesizer(self.params, self.grid, 8.0, 0.25)
        self.assertLessEqual(synthesizer.psd_clip_mass, CLIP_BUDGET * synthesizer.total_variance)

    def test_fine_bands_are_white(self):
        """Test bands below one grid spacing are independent per-site noise"""
        synthesizer = FieldSynthesizer(self.params, GridSpec(dim=1, points_per_dim=64), 5.0, 0.25)
        self.assertIsNone(synthesizer._factors[-1])
        self.assertIsNotNone(synthesizer._factors[0])

    def test_dimension_mismatch_rejected(self):
        """Test a grid of another dimension raises ParameterError"""
        with self.assertRaises(ParameterError):
            FieldSynthesizer(self.params, GridSpec(dim=2, points_per_dim=64), 2.0, 0.25)


class SamplerFidelityTest(SimpleTestCase):

    def setUp(self):
        """Set up replicas of an almost star-scale field"""
        seed = build_seed(1, 4096)
        self.grid = GridSpec(dim=1, points_per_dim=256)
        self.pure = FieldParams(dim=1, alpha=1.0, frak_a=0.0, seed=seed)
        self.almost = FieldParams(dim=1, alpha=1.0, frak_a=1.0, seed=seed)

    def assertWithinBand(self, estimate, target):
        self.assertLessEqual(
            abs(estimate.estimate - target), SE_BAND * estimate.std_error,
            msg=f"{estimate} vs {target}",
        )

    def test_site_variance(self):
        """Test per-site variance of X_4 against sigma_sq(4) = 4"""
        samples = draw(FieldSynthesizer(self.pure, self.grid, 4.0, 0.25))
        fields = np.array([sample.full for sample in samples])
        target = sigma_sq(self.pure, 4.0)
        self.assertAlmostEqual(realized_variance(self.pure, 4.0, 0.25), target, places=12)
        for estimate in empirical_cov(fields, [(0, 0), (100, 100)]):
            self.assertWithinBand(estimate, target)

    def test_covariance_at_separation(self):
        """Test Cov(X_6(x), X_6(y)) at |x - y| near e^{-2} against the band oracle"""
        samples = draw(FieldSynthesizer(self.almost, self.grid, 6.0, 0.25))
        fields = np.array([sample.full for sample in samples])
        oracle = band_covariance_grid(self.almost, self.grid, 6.0, 0.25)
        offset = self.grid.site_index(math.exp(-2.0))[0]
        (estimate,) = empirical_cov(fields, [(40, 40 + offset)])
        self.assertWithinBand(estimate, oracle[offset])

    def test_layers_independent_and_gaussian(self):
        """Test layers are uncorrelated and site marginals are Gaussian"""
        samples = draw(FieldSynthesizer(self.pure, self.grid, 4.0, 0.25))
        self.assertWithinBand(cross_layer_cov(samples, 0, 5, (17,)), 0.0)
        self.assertWithinBand(cross_layer_cov(samples, 2, 15, (17,)), 0.0)
        skew, skew_se, kurt, kurt_se = moment_check([sample.full[17] for sample in samples])
        self.assertLessEqual(abs(skew), SE_BAND * skew_se)
        self.assertLessEqual(abs(kurt), SE_BAND * kurt_se)

    def test_plane_variance(self):
        """Test the two-dimensional sampler reproduces its site variance"""
        params = FieldParams(dim=2, alpha=1.0, frak_a=0.5, seed=build_seed(2, 1024))
        grid = GridSpec(dim=2, points_per_dim=64)
        samples = draw(FieldSynthesizer(params, grid, 3.0, 0.25), count=400)
        fields = np.array([sample.full for sample in samples])
        (estimate,) = empirical_cov(fields, [((5, 9), (5, 9))])
        self.assertWithinBand(estimate, realized_variance(params, 3.0, 0.25))


class RegularizationTest(SimpleTestCase):

    def setUp(self):
        """Set up one sample on a 256-point grid"""
        self.params = FieldParams(dim=1, alpha=1.0, frak_a=0.0, seed=build_seed(1, 4096))
        self.grid = GridSpec(dim=1, points_per_dim=256)
        self.sample = sample_field(self.params, self.grid, 6.0, 0.25, 5)

    def test_truncated_identity(self):
        """Test truncated(t_max) is the stored sum"""
        np.testing.assert_array_equal(field_at(self.sample, Truncated(6.0)), self.sample.full)

    def test_mollification_preserves_mean(self):
        """Test convolution with phi_eps keeps the spatial mean"""
        smoothed = field_at(self.sample, Mollified(math.exp(-3)))
        self.assertAlmostEqual(smoothed.mean(), self.sample.full.mean(), places=10)
        self.assertLess(smoothed.var(), self.sample.full.var())

    def test_truncated_mollified(self):
        """Test X_{t,eps} mollifies the truncated field"""
        expected = mollify(self.sample.truncated(3.0), self.grid, math.exp(-3))
        np.testing.assert_array_equal(field_at(self.sample, TruncatedMollified(3.0, math.exp(-3))), expected)

    def test_epsilon_below_resolution_rejected(self):
        """Test eps below four grid spacings raises ParameterError"""
        with self.assertRaises(ParameterError):
            field_at(self.sample, Mollified(2.0 / 256))
        with self.assertRaises(ParameterError):
            field_at(self.sample, Mollified(0.8))

    def test_covariance_grids(self):
        """Test the mollified covariance reduces to the band covariance and stays symmetric"""
        plain = mollified_covariance_grid(self.params, self.grid, 6.0, 0.25)
        np.testing.assert_allclose(plain, band_covariance_grid(self.params, self.grid, 6.0, 0.25), atol=1e-12)
        eps1, eps2 = math.exp(-3), math.exp(-4)
        cross = mollified_covariance_grid(self.params, self.grid, 6.0, 0.25, eps1, eps2)
        swapped = mollified_covariance_grid(self.params, self.grid, 6.0, 0.25, eps2, eps1)
        np.testing.assert_allclose(cross, swapped, atol=1e-12)
        smooth = mollified_covariance_grid(self.params, self.grid, 6.0, 0.25, eps1, eps1)
        self.assertLess(smooth[0], plain[0])

    def test_mollified_variance_logarithmic(self):
        """Test Var(X_eps) follows log(1/eps) up to a bounded constant"""
        for n in (2, 3, 4):
            variance = regularized_variance(self.params, self.grid, 6.0, 0.25, Mollified(math.exp(-n)))
            self.assertLess(abs(variance - n), 2.0)
        self.assertAlmostEqual(regularized_variance(self.params, self.grid, 6.0, 0.25, Truncated(4.0)), 4.0, places=12)

    def test_tail_margin(self):
        """Test t_max must exceed log(1/eps) by the tail margin"""
        check_tail_margin(6.0, math.exp(-2))
        check_tail_margin(3.0 + TAIL_MARGIN, math.exp(-3))
        with self.assertRaises(ParameterError):
            check_tail_margin(6.0, math.exp(-3))
        self.assertAlmostEqual(tail_variance_bound(6.0, math.exp(-2)), math.exp(-4), places=12)
