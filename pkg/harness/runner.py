import json
import logging
from pathlib import Path

from django.conf import settings
from django.db import transaction

from gmc_lab.exceptions import LabError
from .experiments import EXPERIMENTS, ExperimentContext
from .models import CheckResult, ExperimentRun
from .reports import REPORT_FORMATS, RunReport, emit_report
from .serializers import result_config

logger = logging.getLogger(__name__)

CONFIG_ECHO = 'config.json'
# stands for the output directory so a report does not depend on where it was written
RUN_DIR = '<out>'


def default_output_dir(kind, seed):
    return Path(settings.GMC_LAB_OUTPUT_ROOT) / f"{kind}-seed{seed}"


def reproduce_command(kind, seed):
    return f"python manage.py run_experiment {kind} --config {RUN_DIR}/{CONFIG_ECHO} --seed {seed}"


def _write_config_echo(out_dir, config):
    path = out_dir / CONFIG_ECHO
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with path.open('w') as stream:
            json.dump(config, stream, sort_keys=True, indent=2)
            stream.write('\n')
    except OSError as exc:
        raise LabError(f"cannot write configuration to {path}: {exc}") from exc
    return path


def run_experiment(validated):
    """
    Run the experiment described by a validated configuration.

    Writes the configuration echo, any experiment tables and the report in
    every format under the output directory, records the run and its checks,
    and returns ``(run, report)``.
    """
    kind, seed = validated['kind'], validated['seed']
    out_dir = Path(validated.get('out') or default_output_dir(kind, seed))
    threads = validated.get('threads') or settings.GMC_LAB_THREADS
    config = result_config(validated)

    echo = dict(config, out=str(out_dir))
    _write_config_echo(out_dir, echo)
    ctx = ExperimentContext(
        config=config,
        out_dir=out_dir,
        threads=threads,
        reproduce=reproduce_command(kind, seed),
    )

    logger.info("running %s (seed %d, %d replicas, %d threads) into %s",
                kind, seed, config['replicas'], threads, out_dir)
    checks = EXPERIMENTS[kind](ctx)
    report = RunReport(kind=kind, seed=seed, config=config, checks=tuple(checks), metadata=ctx.metadata)
    for fmt in REPORT_FORMATS:
        emit_report(report, fmt, out_dir)

    with transaction.atomic():
        run = ExperimentRun.objects.create(
            kind=kind,
            seed=seed,
            config=config,
            passed=report.passed,
            check_count=len(report.checks),
            failed_count=len(report.failed_checks),
            output_dir=str(out_dir),
        )
        CheckResult.objects.bulk_create([
            CheckResult(
                run=run,
                name=row.name,
                oracle_kind=row.oracle_kind,
                oracle_value=row.oracle_value,
                estimate=row.estimate,
                std_error=row.std_error,
                tolerance=row.tolerance,
                passed=row.passed,
                hard=row.hard,
                reproduce=row.reproduce.replace(RUN_DIR, str(out_dir)),
            )
            for row in report.checks
        ])
    logger.info("%s finished: %d checks, %d hard failures", kind, run.check_count, run.failed_count)
    return run, report
