"""
Run reports: one row per check plus the configuration echo and an
environment stamp, emitted as CSV, JSON and a markdown summary.

Floats are quantized to 12 significant digits when a row is built, so a
report written to JSON reads back equal and identical inputs give identical
bytes.
"""

import csv
import json
import logging
import math
import platform
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import django
import numpy as np
import scipy

from gmc_lab.exceptions import LabError
from kernels.export import format_float

logger = logging.getLogger(__name__)

REPORT_FORMATS = ('csv', 'json', 'markdown')
REPORT_FILES = {'csv': 'checks.csv', 'json': 'report.json', 'markdown': 'summary.md'}
CHECK_COLUMNS = (
    'name', 'oracle_kind', 'oracle_value', 'estimate', 'std_error',
    'tolerance', 'passed', 'hard', 'reproduce',
)
_FLOAT_FIELDS = ('oracle_value', 'estimate', 'std_error', 'tolerance')


def quantize(value):
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return value
    return float(format_float(value))


@dataclass(frozen=True)
class CheckRow:
    name: str
    oracle_kind: str
    oracle_value: Optional[float]
    estimate: Optional[float]
    std_error: Optional[float]
    tolerance: Optional[float]
    passed: bool
    hard: bool = True
    reproduce: str = ''

    def __post_init__(self):
        for name in _FLOAT_FIELDS:
            object.__setattr__(self, name, quantize(getattr(self, name)))
        object.__setattr__(self, 'passed', bool(self.passed))
        object.__setattr__(self, 'hard', bool(self.hard))


def environment_stamp():
    """Library versions the numbers depend on; no clock or host data."""
    return {
        'python': platform.python_version(),
        'django': django.get_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
    }


@dataclass(frozen=True)
class RunReport:
    kind: str
    seed: int
    config: dict
    checks: tuple
    metadata: dict = field(default_factory=dict)
    environment: dict = field(default_factory=environment_stamp)

    @property
    def failed_checks(self):
        return [row for row in self.checks if row.hard and not row.passed]

    @property
    def passed(self):
        return not self.failed_checks

    def to_dict(self):
        return {
            'kind': self.kind,
            'seed': self.seed,
            'config': self.config,
            'metadata': self.metadata,
            'environment': self.environment,
            'passed': self.passed,
            'checks': [asdict(row) for row in self.checks],
        }

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(CheckRow)}
        checks = tuple(CheckRow(**{k: v for k, v in row.items() if k in names}) for row in data['checks'])
        return cls(
            kind=data['kind'],
            seed=int(data['seed']),
            config=data['config'],
            checks=checks,
            metadata=data.get('metadata', {}),
            environment=data['environment'],
        )


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return value


def write_checks_csv(stream, report):
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CHECK_COLUMNS)
    for row in report.checks:
        writer.writerow([_cell(getattr(row, column)) for column in CHECK_COLUMNS])
    return len(report.checks)


def write_report_json(stream, report):
    json.dump(report.to_dict(), stream, sort_keys=True, indent=2)
    stream.write('\n')


def write_summary_markdown(stream, report):
    status = 'PASSED' if report.passed else f'FAILED ({len(report.failed_checks)} hard checks)'
    stream.write(f"# {report.kind} (seed {report.seed}): {status}\n\n")
    stream.write("| check | oracle | value | estimate | SE | tolerance | result |\n")
    stream.write("|---|---|---|---|---|---|---|\n")
    for row in report.checks:
        if row.passed:
            result = 'pass'
        else:
            result = 'FAIL' if row.hard else 'fail (soft)'
        cells = [row.name, row.oracle_kind] + [_cell(getattr(row, name)) for name in _FLOAT_FIELDS] + [result]
        stream.write('| ' + ' | '.join(str(cell) for cell in cells) + ' |\n')
    if report.metadata:
        stream.write('\n## Metadata\n\n')
        for key in sorted(report.metadata):
            stream.write(f"- {key}: {report.metadata[key]}\n")
    stream.write('\n## Environment\n\n')
    for key in sorted(report.environment):
        stream.write(f"- {key}: {report.environment[key]}\n")


_WRITERS = {'csv': write_checks_csv, 'json': write_report_json, 'markdown': write_summary_markdown}


def emit_report(report, fmt, out_dir):
    """Write ``report`` in one of REPORT_FORMATS under ``out_dir``; returns the file path."""
    try:
        writer = _WRITERS[fmt]
    except KeyError:
        raise LabError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}") from None
    path = Path(out_dir) / REPORT_FILES[fmt]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='') as stream:
            writer(stream, report)
    except OSError as exc:
        raise LabError(f"cannot write {fmt} report to {path}: {exc}") from exc
    logger.info("wrote %s report to %s", fmt, path)
    return path


def load_report(path):
    with Path(path).open() as stream:
        return RunReport.from_dict(json.load(stream))
