from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from gmc_lab.exceptions import LabError
from kernels.export import mollifier_rows, seed_rows, write_radial_csv
from kernels.seed import build_mollifier, build_seed


class Command(BaseCommand):
    help = 'Export the tabulated seed kernel or mollifier as CSV (columns r, value)'

    def add_arguments(self, parser):
        parser.add_argument('which', choices=['seed', 'mollifier'])
        parser.add_argument('--dim', type=int, default=1)
        parser.add_argument('--resolution', type=int, default=settings.GMC_LAB_SEED_RESOLUTION)
        parser.add_argument('--out', type=Path, help='Output file; stdout when omitted')

    def handle(self, *args, **options):
        try:
            if options['which'] == 'seed':
                seed = build_seed(options['dim'], options['resolution'])
                radii, values = seed_rows(seed)
                summary = f"seed kernel d={seed.dim}, spectral_min={seed.spectral_min:.3e}"
            else:
                radii, values = mollifier_rows(build_mollifier(options['dim'], options['resolution']))
                summary = f"mollifier d={options['dim']}"
        except LabError as exc:
            raise CommandError(str(exc)) from exc

        if options['out'] is None:
            write_radial_csv(self.stdout, radii, values)
            return
        options['out'].parent.mkdir(parents=True, exist_ok=True)
        with options['out'].open('w', newline='') as stream:
            rows = write_radial_csv(stream, radii, values)
        self.stdout.write(self.style.SUCCESS(f"Wrote {rows} rows for {summary} to {options['out']}"))
