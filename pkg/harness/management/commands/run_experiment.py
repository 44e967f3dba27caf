import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from gmc_lab.exceptions import LabError
from harness.models import EXPERIMENT_KINDS
from harness.runner import run_experiment
from harness.serializers import ExperimentConfigSerializer


def _format_errors(errors):
    lines = []
    for key, messages in sorted(errors.items()):
        if isinstance(messages, dict):
            messages = [f"{k}: {v}" for k, v in messages.items()]
        for message in messages:
            lines.append(f"{key}: {message}")
    return '; '.join(lines)


class Command(BaseCommand):
    help = 'Run one laboratory experiment and write its CSV, JSON and markdown report'

    def add_arguments(self, parser):
        parser.add_argument('kind', choices=[kind for kind, _ in EXPERIMENT_KINDS])
        parser.add_argument('--config', type=Path, help='JSON configuration file')
        parser.add_argument('--out', help='Output directory; defaults under GMC_LAB_OUTPUT_ROOT')
        parser.add_argument('--seed', type=int, help='Base seed, overriding the configuration')
        parser.add_argument('--replicas', type=int, help='Replica count, overriding the configuration')
        parser.add_argument('--threads', type=int, help='Worker threads over replicas')

    def load_config(self, path):
        if path is None:
            return {}
        try:
            with path.open() as stream:
                data = json.load(stream)
        except OSError as exc:
            raise CommandError(f"cannot read configuration {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise CommandError(f"configuration {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise CommandError(f"configuration {path} must be a JSON object")
        return data

    def handle(self, *args, **options):
        data = self.load_config(options['config'])
        kind = options['kind']
        if data.get('kind', kind) != kind:
            raise CommandError(f"configuration is for {data['kind']!r}, not {kind!r}")
        data['kind'] = kind
        for key in ('out', 'seed', 'replicas', 'threads'):
            if options[key] is not None:
                data[key] = options[key]

        serializer = ExperimentConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"invalid configuration: {_format_errors(serializer.errors)}")

        try:
            run, report = run_experiment(serializer.validated_data)
        except LabError as exc:
            raise CommandError(str(exc)) from exc

        for row in report.checks:
            line = f"  {row.name}: estimate={row.estimate} oracle={row.oracle_value} tol={row.tolerance}"
            if row.passed:
                self.stdout.write(f"{line} ok")
            elif row.hard:
                self.stdout.write(self.style.ERROR(f"{line} FAILED"))
            else:
                self.stdout.write(self.style.WARNING(f"{line} missed (soft)"))

        if not run.passed:
            raise CommandError(
                f"{run.failed_count} of {run.check_count} hard checks failed; see {run.output_dir}"
            )
        self.stdout.write(self.style.SUCCESS(
            f"{kind}: {run.check_count} checks passed (run {run.pk}), report in {run.output_dir}"
        ))
