from django.db import models

EXPERIMENT_KINDS = (
    ('identities', 'Hermite and Wick identities'),
    ('covcheck', 'Covariance oracle'),
    ('sample', 'Sampler fidelity'),
    ('gmc-moments', 'GMC moment identities'),
    ('series-check', 'Pathwise series identity'),
    ('growth-report', 'Coefficient growth'),
    ('thickness', 'Thick points'),
    ('badmass', 'Good/bad decomposition'),
    ('toy-martingale', 'Toy martingale'),
)


class ExperimentRun(models.Model):
    kind = models.CharField(max_length=32, choices=EXPERIMENT_KINDS)
    seed = models.BigIntegerField()
    config = models.JSONField()
    passed = models.BooleanField(default=False)
    check_count = models.IntegerField(default=0)
    failed_count = models.IntegerField(default=0)
    output_dir = models.CharField(max_length=500)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at', '-id']

    def __str__(self):
        status = 'passed' if self.passed else f'{self.failed_count} failed'
        return f"{self.kind} run (seed {self.seed}): {self.check_count} checks, {status}"


class CheckResult(models.Model):
    run = models.ForeignKey(ExperimentRun, on_delete=models.CASCADE, related_name='checks')
    name = models.CharField(max_length=200)
    oracle_kind = models.CharField(max_length=100)
    oracle_value = models.FloatField(null=True, blank=True)
    estimate = models.FloatField(null=True, blank=True)
    std_error = models.FloatField(null=True, blank=True)
    tolerance = models.FloatField(null=True, blank=True)
    passed = models.BooleanField()
    hard = models.BooleanField(default=True)
    reproduce = models.CharField(max_length=500, blank=True)

    class Meta:
        ordering = ['id']

    def __str__(self):
        return f"{self.name}: {'pass' if self.passed else 'FAIL'}"
