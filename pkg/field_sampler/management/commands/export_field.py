from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from gmc_lab.exceptions import LabError
from field_sampler.export import write_binary, write_csv
from field_sampler.grid import GridSpec
from field_sampler.synthesis import sample_field
from kernels.seed import FieldParams, default_seed


class Command(BaseCommand):
    help = 'Sample one field X_{t_max} and write it as a binary or CSV snapshot'

    def add_arguments(self, parser):
        parser.add_argument('--dim', type=int, default=1)
        parser.add_argument('--points', type=int, default=256, help='Grid points per dimension')
        parser.add_argument('--t-max', type=float, default=4.0)
        parser.add_argument('--delta-u', type=float, default=0.25)
        parser.add_argument('--alpha', type=float, default=1.0)
        parser.add_argument('--frak-a', type=float, default=0.0)
        parser.add_argument('--seed', type=int, default=1)
        parser.add_argument('--format', choices=['binary', 'csv'], default='binary')
        parser.add_argument('--out', type=Path, required=True)

    def handle(self, *args, **options):
        try:
            params = FieldParams(
                dim=options['dim'],
                alpha=options['alpha'],
                frak_a=options['frak_a'],
                seed=default_seed(options['dim']),
            )
            grid = GridSpec(dim=options['dim'], points_per_dim=options['points'])
            sample = sample_field(params, grid, options['t_max'], options['delta_u'], options['seed'])
        except LabError as exc:
            raise CommandError(str(exc)) from exc

        out = options['out']
        out.parent.mkdir(parents=True, exist_ok=True)
        if options['format'] == 'binary':
            with out.open('wb') as stream:
                write_binary(stream, sample.full, sample.t_max, sample.rng_seed)
        else:
            try:
                with out.open('w', newline='') as stream:
                    write_csv(stream, sample.full)
            except LabError as exc:
                raise CommandError(str(exc)) from exc
        self.stdout.write(self.style.SUCCESS(
            f"Wrote {options['format']} snapshot of {grid} (t_max={sample.t_max}, seed={sample.rng_seed}) to {out}"
        ))
