"""
Experiment registry for ``run_experiment``.

Every experiment takes an ExperimentContext and returns its CheckRows.
Monte Carlo checks compare against exact-in-discretization oracles at
MC_BAND standard errors. Soft rows are diagnostics and never fail a run.
Plot-ready tables go next to the report in ``out_dir``; run metadata such as
the tail-variance bound of every mollified regularization goes into the report.
"""

import cmath
import math
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import integrate, stats

from gmc_lab.exceptions import ParameterError
from events.decomposition import bad_mass_row, first_failure_map, partition_counts, split_good_bad
from events.export import write_bad_mass_csv, write_thickness_csv
from events.lattice import GoodEventConfig, default_gamma_hat
from events.martingale import hermite_martingale_check, toy_martingale_stat
from events.thickness import critical_thickness, thickness_profile
from field_sampler.bands import band_covariance_grid
from field_sampler.grid import GridSpec
from field_sampler.regularization import (
    Mollified,
    check_tail_margin,
    field_at,
    regularized_covariance_grid,
    regularized_variance,
    tail_variance_bound,
)
from field_sampler.statistics import jackknife_covariance, moment_check, scaling_check
from field_sampler.streams import make_generator, split_seed
from field_sampler.synthesis import FieldSynthesizer
from gmc.estimators import direct_complex, series_eval, wick_power_sequence
from gmc.eye import EyeDomain, boundary_distance
from gmc.functions import TestFunction
from gmc.growth import coefficient_growth_report, growth_slope, write_growth_csv
from gmc.moments import Mean, Second, cauchy_gap_oracle, moment_oracle
from hermite_wick.gaussian import HermitePair, gauss_expect_hermite, gauss_hermite_expectation, hermite_orthogonality
from hermite_wick.polynomials import (
    UMBRAL_IDENTITIES,
    generating_series_residual,
    hermite_sequence,
    mehler_bound,
    umbral_residual,
)
from hermite_wick.wick import WickTriple, evaluate_wick, wick_pair_kernel, wick_pair_moment
from kernels.covariance import LOG_GAP_BOUND, cov_star_profile, log_asymptotic_gap, sigma_sq
from kernels.seed import FieldParams, default_seed, spectral_decay_slope
from .reports import CheckRow, quantize
from .replicas import map_replicas, replica_mean

logger = logging.getLogger(__name__)

MC_BAND = 3.0
SECOND_MOMENT_BAND = 4.0
GENERATING_TERMS = 60
SERIES_GAP_TOL = 1e-6
GROWTH_SLOPE_LIMIT = 0.1
SERIES_RADIUS_FRACTION = 0.8
THICKNESS_BAND = (0.7, 1.0)
SAMPLER_PROBE_OFFSETS = (0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48)

EXPERIMENTS = {}


def experiment(kind):
    def register(func):
        EXPERIMENTS[kind] = func
        return func
    return register


@dataclass(frozen=True)
class ExperimentContext:
    config: dict
    out_dir: Path
    threads: int = 1
    reproduce: str = ''
    metadata: dict = field(default_factory=dict)

    @property
    def seed(self):
        return self.config['seed']

    def stream(self, purpose):
        """Base seed of one independent random stream of this run."""
        return split_seed(self.seed, purpose)

    @cached_property
    def params(self):
        c = self.config
        return FieldParams(dim=c['dim'], alpha=c['alpha'], frak_a=c['frak_a'], seed=default_seed(c['dim']))

    @cached_property
    def grid(self):
        return GridSpec(dim=self.config['dim'], points_per_dim=self.config['points'])

    @cached_property
    def synthesizer(self):
        return FieldSynthesizer(self.params, self.grid, self.config['t_max'], self.config['delta_u'])

    @cached_property
    def test_function(self):
        return TestFunction.smoothed_indicator(self.grid, 0.25, 0.75)

    @property
    def epsilons(self):
        return [math.exp(-depth) for depth in self.config['eps_schedule']]

    def mollified(self, eps):
        """Mollified(eps) of X_{t_max}; records the variance bound of the neglected tail."""
        t_max = self.config['t_max']
        check_tail_margin(t_max, eps)
        bounds = self.metadata.setdefault('tail_variance_bound', {})
        bounds[f'{eps:.12g}'] = quantize(tail_variance_bound(t_max, eps))
        return Mollified(eps)

    def replicas(self, func, purpose=0):
        # factorize once here, not in whichever worker thread gets there first
        self.synthesizer
        return map_replicas(func, self.stream(purpose), self.config['replicas'], self.threads)

    def sigma_eps(self, reg):
        c = self.config
        return math.sqrt(regularized_variance(self.params, self.grid, c['t_max'], c['delta_u'], reg))

    def covariance_grid(self, first, second=None):
        c = self.config
        return regularized_covariance_grid(self.params, self.grid, c['t_max'], c['delta_u'], first, second)

    def row(self, name, oracle_kind, oracle, estimate, std_error, tolerance, passed, hard=True):
        if not passed:
            logger.warning("%s check %r %s: estimate %s vs %s", self.config['kind'], name,
                           'failed' if hard else 'missed (soft)', estimate, oracle)
        return CheckRow(name, oracle_kind, oracle, estimate, std_error, tolerance, passed, hard, self.reproduce)

    def within(self, name, oracle_kind, oracle, estimate, tolerance, hard=True):
        passed = abs(estimate - oracle) <= tolerance
        return self.row(name, oracle_kind, oracle, estimate, None, tolerance, passed, hard)

    def band(self, name, oracle_kind, oracle, mean, width=MC_BAND, hard=True):
        tolerance = width * mean.std_error
        passed = abs(mean.estimate - oracle) <= tolerance
        return self.row(name, oracle_kind, oracle, mean.estimate, mean.std_error, tolerance, passed, hard)

    def write_table(self, filename, writer, *args):
        path = self.out_dir / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='') as stream:
            count = writer(stream, *args)
        logger.info("wrote %d rows to %s", count, path)
        return path


def _generating_scale(t, x, k, K):
    values = hermite_sequence(k + K, x)
    terms = sum(abs(t) ** n / math.factorial(n) * abs(values[k + n]) for n in range(K + 1))
    return max(1.0, terms)


@experiment('identities')
def hermite_identities(ctx):
    rng = make_generator(ctx.stream(0))
    rows = []

    axis = np.linspace(-3.0, 3.0, 7)
    for k in (0, 3):
        worst = max(
            generating_series_residual(t, x, k, GENERATING_TERMS) / _generating_scale(t, x, k, GENERATING_TERMS)
            for t in axis for x in axis
        )
        rows.append(ctx.within(f'generating series k={k}', 'closed form', 0.0, worst, 1e-12))

    for which in UMBRAL_IDENTITIES:
        worst = max(
            umbral_residual(
                which, int(rng.integers(0, 21)), rho=rng.uniform(-0.99, 0.99),
                u=rng.uniform(-3.0, 3.0), v=rng.uniform(-3.0, 3.0), relative=True,
            )
            for _ in range(100)
        )
        rows.append(ctx.within(f'umbral {which}', 'algebraic identity', 0.0, worst, 1e-10))

    violations = sum(
        not mehler_bound(int(rng.integers(0, 21)), rng.uniform(-6.0, 6.0), rng.uniform(0.01, 0.99)).holds
        for _ in range(10_000)
    )
    rows.append(ctx.within('Mehler bound violations', 'inequality', 0.0, violations, 0.0))

    gram = hermite_orthogonality(10)
    expected = np.diag([float(math.factorial(k)) for k in range(11)])
    worst = float(np.max(np.abs(gram - expected) / np.maximum(1.0, expected.diagonal()[:, None])))
    rows.append(ctx.within('orthogonality k<=10', 'Gauss-Hermite quadrature', 0.0, worst, 1e-8))

    worst = 0.0
    for _ in range(50):
        k = int(rng.integers(0, 9))
        pair = None
        if rng.random() < 0.5:
            pair = HermitePair(rng.uniform(-0.95, 0.95), rng.uniform(-3.0, 3.0), rng.uniform(-1.0, 1.0))
        sigma1, m1 = rng.uniform(-0.95, 0.95), rng.uniform(-3.0, 3.0)
        oracle = gauss_hermite_expectation(k, sigma1, m1, pair)
        gap = abs(gauss_expect_hermite(k, sigma1, m1, pair) - oracle) / max(1.0, abs(oracle))
        worst = max(worst, gap)
    rows.append(ctx.within('Gaussian Hermite expectation', 'Gauss-Hermite quadrature', 0.0, worst, 1e-8))

    # pairwise gaps in units of 1e-9 |reference| + 1e-11 (sum of absolute terms)
    worst = 0.0
    for _ in range(1000):
        sigma = rng.uniform(0.3, 1.5)
        magnitude = rng.uniform(0.0, 4.0) / sigma
        gamma = magnitude * cmath.exp(1j * rng.uniform(0.0, 2 * math.pi))
        triple = WickTriple(int(rng.integers(0, 11)), gamma, sigma)
        z = rng.uniform(-6.0, 6.0) * sigma
        closed = evaluate_wick(z, triple, 'closed')
        for method in ('series', 'derivative'):
            other = evaluate_wick(z, triple, method)
            allowed = 1e-9 * abs(closed.value) + 1e-11 * max(1.0, float(closed.scale), float(other.scale))
            worst = max(worst, abs(other.value - closed.value) / allowed)
    rows.append(ctx.within('Wick representations agree', 'three-way comparison', 0.0, worst, 1.0))

    worst = 0.0
    for _ in range(200):
        j, k = int(rng.integers(0, 7)), int(rng.integers(0, 7))
        g1, g2 = complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)), rng.uniform(-1.0, 1.0)
        cov = rng.uniform(-1.0, 1.5)
        closed = complex(wick_pair_kernel(j, k, g1, g2, cov))
        gap = abs(wick_pair_moment(j, k, g1, g2, cov) - closed) / max(1.0, abs(closed))
        worst = max(worst, gap)
    rows.append(ctx.within('Wick pair moment series', 'closed form', 0.0, worst, 1e-10))
    return rows


@experiment('covcheck')
def covariance_oracle(ctx):
    rng = make_generator(ctx.stream(0))
    base = ctx.params
    rows = []

    worst = 0.0
    for _ in range(20):
        params = FieldParams(base.dim, rng.uniform(0.5, 3.0), rng.uniform(0.0, 1.0), base.seed)
        t = rng.uniform(0.1, 10.0)
        quadrature, _ = integrate.quad(params.band_weight, 0.0, t, epsabs=1e-13, epsrel=1e-13)
        worst = max(worst, abs(sigma_sq(params, t) - quadrature))
    rows.append(ctx.within('sigma_t^2 closed form', 'quadrature', 0.0, worst, 1e-9))

    worst = max(
        log_asymptotic_gap(base.with_frak_a(frak_a), math.exp(-n))
        for frak_a in (0.0, 0.5, 1.0) for n in range(2, 10)
    )
    rows.append(ctx.within('|C(inf, r) - log(1/r)|', 'frozen bound', 0.0, worst, LOG_GAP_BOUND))

    delta_u = ctx.config['delta_u']
    worst = 0.0
    for _ in range(30):
        params = base.with_frak_a(rng.uniform(0.0, 1.0))
        t0 = delta_u * int(rng.integers(1, 13))
        t = t0 + rng.uniform(0.0, 4.0)
        pairs = [tuple(points) for points in rng.uniform(0.0, 0.5, size=(3, 2, base.dim))]
        worst = max(worst, scaling_check(params, math.exp(-t0), t, pairs, delta_u))
    rows.append(ctx.within('scaling identity defect', 'quadrature', 0.0, worst, 1e-8))

    rows.append(ctx.within(
        'seed spectrum minimum', 'positive definiteness', 0.0, min(base.seed.spectral_min, 0.0), 1e-6,
    ))
    slope = spectral_decay_slope(base.seed)
    rows.append(ctx.within('seed spectral decay slope', 'power law -(d+1)', -(base.dim + 1.0), slope, 0.5, hard=False))
    return rows


@experiment('sample')
def sampler_fidelity(ctx):
    c = ctx.config
    synthesizer = ctx.synthesizer
    grid = ctx.grid
    m = grid.points_per_dim
    offsets = [o for o in SAMPLER_PROBE_OFFSETS if o < m // 2]
    origin = m // 4
    # probe sites step along the first axis from the origin site
    probes = (np.array([(origin + o) % m for o in offsets]),) + (origin,) * (grid.dim - 1)
    layer_count = len(synthesizer.bands)
    if layer_count < 2:
        raise ParameterError(f"sampler check needs at least two bands, t_max={c['t_max']} gives {layer_count}")
    layer_pairs = sorted({(0, 1), (layer_count // 2 - 1, layer_count // 2), (layer_count - 2, layer_count - 1)})
    site = (origin,) * grid.dim

    def draw(seed):
        sample = synthesizer.sample(seed)
        return sample.full[probes], sample.layers[(slice(None),) + site]

    draws = ctx.replicas(draw)
    values = np.array([d[0] for d in draws])
    layers = np.array([d[1] for d in draws])
    cov_grid = band_covariance_grid(ctx.params, grid, c['t_max'], c['delta_u'])
    quadrature = cov_star_profile(ctx.params, c['t_max'], c['t_max'], np.array(offsets) / m)

    rows = []
    worst_discretization = 0.0
    for j, offset in enumerate(offsets):
        oracle = float(cov_grid[(offset,) + (0,) * (grid.dim - 1)])
        estimate = jackknife_covariance(values[:, 0], values[:, j])
        rows.append(ctx.band(f'covariance at offset {offset}', 'band covariance grid', oracle, estimate))
        worst_discretization = max(worst_discretization, abs(oracle - quadrature[j]))
    rows.append(ctx.within(
        'band discretization gap', 'quadrature', 0.0, worst_discretization, 0.05, hard=False,
    ))
    for a, b in layer_pairs:
        estimate = jackknife_covariance(layers[:, a], layers[:, b])
        rows.append(ctx.band(f'layer covariance {a},{b}', 'independence', 0.0, estimate))
    skew, skew_se, kurt, kurt_se = moment_check(values[:, 0])
    rows.append(ctx.row('site skewness', 'Gaussian', 0.0, skew, skew_se, MC_BAND * skew_se,
                        abs(skew) <= MC_BAND * skew_se))
    rows.append(ctx.row('site excess kurtosis', 'Gaussian', 0.0, kurt, kurt_se, MC_BAND * kurt_se,
                        abs(kurt) <= MC_BAND * kurt_se))
    return rows


def _functional_sequence(f, field, k_max, gamma, sigma_eps):
    site_axes = tuple(range(1, f.grid.dim + 1))
    return np.mean(f.values * wick_power_sequence(field, k_max, gamma, sigma_eps), axis=site_axes).real


@experiment('gmc-moments')
def gmc_moments(ctx):
    c = ctx.config
    f, gamma, k_max = ctx.test_function, c['gamma'], c['k_max']
    first = ctx.mollified(ctx.epsilons[0])
    second = ctx.mollified(ctx.epsilons[1]) if len(ctx.epsilons) > 1 else None
    sigma1 = ctx.sigma_eps(first)
    sigma2 = ctx.sigma_eps(second) if second else None

    def draw(seed):
        sample = ctx.synthesizer.sample(seed)
        values = _functional_sequence(f, field_at(sample, first), k_max, gamma, sigma1)
        if second is None:
            return values, 0.0
        other = _functional_sequence(f, field_at(sample, second), 0, gamma, sigma2)[0]
        return values, (values[0] - other) ** 2

    draws = ctx.replicas(draw)
    values = np.array([d[0] for d in draws])
    cov11 = ctx.covariance_grid(first)

    rows = []
    for k in range(k_max + 1):
        mean = replica_mean(values[:, k])
        rows.append(ctx.band(f'mean k={k}', 'mean oracle', moment_oracle(Mean(k), f, gamma).real, mean))
    for k in range(k_max + 1):
        mean = replica_mean(values[:, k] ** 2)
        oracle = moment_oracle(Second(k), f, gamma, cov11).real
        rows.append(ctx.band(f'second moment k={k}', 'double-sum oracle', oracle, mean, width=SECOND_MOMENT_BAND))
    if second is not None:
        oracle = cauchy_gap_oracle(f, gamma, cov11, ctx.covariance_grid(first, second), ctx.covariance_grid(second))
        mean = replica_mean([d[1] for d in draws])
        rows.append(ctx.band('Cauchy gap', 'double-sum oracle', oracle, mean, width=SECOND_MOMENT_BAND))
    return rows


@experiment('series-check')
def series_identity(ctx):
    c = ctx.config
    f, gamma = ctx.test_function, c['gamma']
    reg = ctx.mollified(ctx.epsilons[0])
    sigma = ctx.sigma_eps(reg)
    eye = EyeDomain(c['dim'])
    radius = c['gamma_prime_radius']
    if radius is None:
        radius = SERIES_RADIUS_FRACTION * eye.disc_radius(gamma)
    count = c['gamma_prime_count']
    shifts = [gamma + radius * complex(math.cos(a), math.sin(a))
              for a in 2 * math.pi * np.arange(count) / count]
    outside = [g for g in shifts if g not in eye]
    if outside:
        raise ParameterError(f"gamma'={outside[0]:.6g} lies outside the eye for d={c['dim']}")
    ctx.metadata['gamma_prime_margin'] = quantize(float(np.min(boundary_distance(shifts, c['dim']))))
    ctx.metadata['gamma_prime_l2_phase'] = all(eye.in_l2_phase(g) for g in shifts)

    def draw(seed):
        field = field_at(ctx.synthesizer.sample(seed), reg)
        worst, terms = 0.0, 0
        for gamma_prime in shifts:
            value, used = series_eval(f, field, gamma, gamma_prime, c['tol'], sigma)
            direct = direct_complex(f, field, gamma_prime, sigma)
            worst = max(worst, abs(value - direct) / abs(direct))
            terms = max(terms, used)
        return worst, terms

    draws = ctx.replicas(draw)
    worst = max(d[0] for d in draws)
    logger.info("series-check used up to %d terms over %d samples", max(d[1] for d in draws), len(draws))
    return [ctx.within(
        f'series vs direct on |gamma\'-{gamma}|={radius:.6g}', 'pathwise identity',
        0.0, worst, SERIES_GAP_TOL,
    )]


@experiment('growth-report')
def growth_report(ctx):
    c = ctx.config
    f = ctx.test_function
    rows = []
    for eps in sorted(ctx.epsilons, reverse=True):
        reg = ctx.mollified(eps)

        def draw(seed, reg=reg):
            return field_at(ctx.synthesizer.sample(seed), reg)

        # identical seeds at every epsilon couple the columns of the table
        fields = ctx.replicas(draw)
        rows.extend(coefficient_growth_report(f, {eps: (fields, ctx.sigma_eps(reg))}, c['gamma'], c['k_max'], c['eta']))
    ctx.write_table('growth.csv', write_growth_csv, rows)

    finest = min(ctx.epsilons)
    slope = growth_slope(rows, finest)
    return [ctx.row(
        f'growth slope at eps={finest:.6g}', 'no growth in k', 0.0, slope, None, GROWTH_SLOPE_LIMIT,
        abs(slope) <= GROWTH_SLOPE_LIMIT,
    )]


@experiment('thickness')
def thick_points(ctx):
    depths = sorted(ctx.config['t_schedule'])
    profiles = np.array(ctx.replicas(lambda seed: thickness_profile(ctx.synthesizer.sample(seed), depths)))
    ctx.write_table('thickness.csv', write_thickness_csv, depths, profiles)
    medians = np.median(profiles, axis=0)
    critical = critical_thickness(ctx.config['dim'])

    rows = []
    for (s, t), (low, high) in zip(zip(depths, depths[1:]), zip(medians, medians[1:])):
        rows.append(ctx.row(f'median nondecreasing t={s:g}->{t:g}', 'monotone trend', low, high, None, None,
                            high >= low))
    lower, upper = (bound * critical for bound in THICKNESS_BAND)
    rows.append(ctx.row(f'median at t={depths[-1]:g}', 'critical thickness band', critical, medians[-1], None,
                        upper - lower, lower <= medians[-1] <= upper))
    return rows


@experiment('badmass')
def bad_mass_table(ctx):
    c = ctx.config
    depth = max(c['eps_schedule'])
    if depth != int(depth):
        raise ParameterError(f"badmass needs an integer epsilon depth, got {depth}")
    gamma, k = c['gamma'], c['k_max']
    gamma_hat = c['gamma_hat'] if c['gamma_hat'] is not None else default_gamma_hat(gamma, c['dim'])
    configs = [GoodEventConfig(gamma_hat, n0, int(depth)) for n0 in sorted(c['delta_schedule'])]
    f = ctx.test_function

    def draw(seed):
        sample = ctx.synthesizer.sample(seed)
        out = []
        for cfg in configs:
            labels = first_failure_map(sample, cfg)
            exact = bool(np.all(partition_counts(labels, cfg) == 1))
            split = split_good_bad(f, sample, k, gamma, cfg)
            defect = abs(split.good + split.bad - split.total)
            out.append((abs(split.bad), exact, defect))
        return out

    draws = np.array(ctx.replicas(draw), dtype=float)
    table = [bad_mass_row(draws[:, j, 0], k, gamma, cfg) for j, cfg in enumerate(configs)]
    ctx.write_table('badmass.csv', write_bad_mass_csv, table)

    rows = [
        ctx.within('partition exactness failures', 'exact partition', 0.0, float(np.sum(draws[:, :, 1] == 0)), 0.0),
        ctx.within('split reassembly defect', 'I_good + I_bad = I', 0.0, float(draws[:, :, 2].max()), 0.0),
    ]
    for j in range(len(configs) - 1):
        # paired replicas: the error is that of the per-replica difference
        drop = replica_mean(draws[:, j, 0] - draws[:, j + 1, 0])
        rows.append(ctx.row(
            f'bad mass decreases n0={configs[j].n0}->{configs[j + 1].n0}', 'monotone trend',
            0.0, drop.estimate, drop.std_error, drop.std_error, drop.estimate > drop.std_error,
        ))
    return rows


@experiment('toy-martingale')
def toy_martingale(ctx):
    c = ctx.config
    replicas = c['replicas']
    base = ctx.stream(0)
    rows = [
        ctx.band('k=0 barrier probability', 'Gaussian cdf', float(stats.norm.cdf(1.0)),
                 toy_martingale_stat(0, 1, replicas, split_seed(base, 0))),
        ctx.band('k=1 partial expectation', 'Gaussian density', float(-stats.norm.pdf(1.0)),
                 toy_martingale_stat(1, 1, replicas, split_seed(base, 1))),
    ]

    horizons = sorted({max(1, round(t)) for t in c['t_schedule']})
    results = [toy_martingale_stat(2, T, replicas, split_seed(base, 100 + T)) for T in horizons]
    for (s, a), (t, b) in zip(zip(horizons, results), zip(horizons[1:], results[1:])):
        spread = math.hypot(a.std_error, b.std_error)
        rows.append(ctx.row(f'k=2 no trend T={s}->{t}', 'bounded martingale', a.estimate, b.estimate, spread,
                            MC_BAND * spread, abs(b.estimate - a.estimate) <= MC_BAND * spread))

    for k in (1, 2, 3):
        check = hermite_martingale_check(k, 1.0, 3.0, replicas, split_seed(base, 10 + k))
        rows.append(ctx.band(f'k={k} mean at t=1', 'zero mean', 0.0, check.first))
        rows.append(ctx.band(f'k={k} mean at t=3', 'zero mean', 0.0, check.second))
        rows.append(ctx.band(f'k={k} increment covariance', 'orthogonal increments', 0.0, check.increment_cov))
    return rows
