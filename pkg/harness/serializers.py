import math
from functools import partial

from rest_framework import serializers

from field_sampler.grid import MIN_POINTS
from field_sampler.regularization import MAX_EPSILON, MIN_SPACINGS, TAIL_MARGIN
from gmc.growth import MAX_ORDER
from .models import EXPERIMENT_KINDS, CheckResult, ExperimentRun

SEED_LIMIT = (1 << 63) - 1

# schedules are log-depths n: eps = e^{-n}, delta = e^{-n0}, t = n
DEFAULT_EPS_DEPTHS = (3.0, 4.0)
DEFAULT_DELTA_DEPTHS = (2, 3, 4)
DEFAULT_T_SCHEDULE = (4.0, 6.0, 8.0)
DEFAULT_REPLICAS = 200
# the toy martingale needs far more paths than a field experiment
TOY_REPLICAS = 100_000

# kinds that mollify X_{t_max} and so need t_max >= log(1/eps) + TAIL_MARGIN
MOLLIFIED_KINDS = ('gmc-moments', 'series-check', 'growth-report')

# keys echoed into reports; ``out`` and ``threads`` do not change results
RESULT_KEYS = (
    'kind', 'dim', 'points', 'alpha', 'frak_a', 't_max', 'delta_u',
    'eps_schedule', 'delta_schedule', 't_schedule', 'gamma', 'gamma_prime_radius',
    'gamma_prime_count', 'k_max', 'eta', 'tol', 'gamma_hat', 'replicas', 'seed',
)


def _schedule(child, default, name):
    return serializers.ListField(
        child=child,
        default=partial(list, default),
        allow_empty=False,
        error_messages={'empty': f"{name} must be nonempty."},
    )


class ExperimentConfigSerializer(serializers.Serializer):
    """
    JSON experiment configuration. Unknown keys are rejected so that a typo
    cannot silently fall back to a default.
    """
    kind = serializers.ChoiceField(choices=EXPERIMENT_KINDS)
    dim = serializers.ChoiceField(choices=[1, 2], default=1)
    points = serializers.IntegerField(default=256, min_value=MIN_POINTS)
    alpha = serializers.FloatField(default=1.0)
    frak_a = serializers.FloatField(default=0.5, min_value=0.0, max_value=1.0)
    t_max = serializers.FloatField(default=8.0)
    delta_u = serializers.FloatField(default=0.25)
    eps_schedule = _schedule(serializers.FloatField(), DEFAULT_EPS_DEPTHS, 'eps_schedule')
    delta_schedule = _schedule(serializers.IntegerField(min_value=0), DEFAULT_DELTA_DEPTHS, 'delta_schedule')
    t_schedule = _schedule(serializers.FloatField(), DEFAULT_T_SCHEDULE, 't_schedule')
    gamma = serializers.FloatField(default=0.5)
    gamma_prime_radius = serializers.FloatField(default=None, allow_null=True, min_value=0.0)
    gamma_prime_count = serializers.IntegerField(default=12, min_value=1)
    k_max = serializers.IntegerField(default=2, min_value=0, max_value=MAX_ORDER)
    eta = serializers.FloatField(default=0.2)
    tol = serializers.FloatField(default=1e-10)
    gamma_hat = serializers.FloatField(default=None, allow_null=True)
    replicas = serializers.IntegerField(default=DEFAULT_REPLICAS, min_value=2)
    seed = serializers.IntegerField(default=0, min_value=0, max_value=SEED_LIMIT)
    out = serializers.CharField(required=False, allow_blank=False)
    threads = serializers.IntegerField(required=False, min_value=1)

    def validate_points(self, value):
        if value & (value - 1):
            raise serializers.ValidationError("points must be a power of two.")
        return value

    def validate_alpha(self, value):
        if value <= 0:
            raise serializers.ValidationError("alpha must be positive.")
        return value

    def validate_t_max(self, value):
        if value <= 0:
            raise serializers.ValidationError("t_max must be positive.")
        return value

    def validate_delta_u(self, value):
        if not 0 < value <= 0.5:
            raise serializers.ValidationError("delta_u must lie in (0, 0.5].")
        return value

    def validate_t_schedule(self, value):
        if any(t <= 0 for t in value):
            raise serializers.ValidationError("t_schedule entries must be positive.")
        return value

    def validate_eta(self, value):
        if value <= 0:
            raise serializers.ValidationError("eta must be positive.")
        return value

    def validate_tol(self, value):
        if value <= 0:
            raise serializers.ValidationError("tol must be positive.")
        return value

    def validate(self, attrs):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({key: "Unknown configuration key." for key in unknown})

        spacing_limit = MIN_SPACINGS / attrs['points']
        for depth in attrs['eps_schedule']:
            eps = math.exp(-depth)
            if eps > MAX_EPSILON:
                raise serializers.ValidationError(
                    {'eps_schedule': f"epsilon e^-{depth} exceeds {MAX_EPSILON}."}
                )
            if eps < spacing_limit * (1.0 - 1e-12):
                raise serializers.ValidationError({
                    'eps_schedule': f"epsilon e^-{depth} is below {MIN_SPACINGS} grid spacings "
                                    f"(points={attrs['points']})."
                })
            if attrs['kind'] in MOLLIFIED_KINDS and attrs['t_max'] < depth + TAIL_MARGIN - 1e-9:
                raise serializers.ValidationError({
                    't_max': f"t_max must be at least log(1/eps) + {TAIL_MARGIN:g} = {depth + TAIL_MARGIN:g} "
                             f"for epsilon e^-{depth}."
                })

        if attrs['kind'] == 'toy-martingale' and 'replicas' not in self.initial_data:
            attrs['replicas'] = TOY_REPLICAS
        return attrs


def result_config(validated):
    """The part of a validated configuration that determines the results, as plain JSON data."""
    return {key: validated[key] for key in RESULT_KEYS}


class CheckResultSerializer(serializers.ModelSerializer):
    class Meta:
        model = CheckResult
        fields = ['id', 'name', 'oracle_kind', 'oracle_value', 'estimate', 'std_error',
                  'tolerance', 'passed', 'hard', 'reproduce']


class ExperimentRunListSerializer(serializers.ModelSerializer):
    """Simplified serializer for run listings"""
    kind_display = serializers.CharField(source='get_kind_display', read_only=True)

    class Meta:
        model = ExperimentRun
        fields = ['id', 'kind', 'kind_display', 'seed', 'passed', 'check_count', 'failed_count', 'created_at']


class ExperimentRunDetailSerializer(serializers.ModelSerializer):
    kind_display = serializers.CharField(source='get_kind_display', read_only=True)
    checks = CheckResultSerializer(many=True, read_only=True)

    class Meta:
        model = ExperimentRun
        fields = ['id', 'kind', 'kind_display', 'seed', 'config', 'passed', 'check_count',
                  'failed_count', 'output_dir', 'created_at', 'checks']
