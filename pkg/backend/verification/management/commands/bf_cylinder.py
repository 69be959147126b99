from django.core.management.base import BaseCommand, CommandError

from verification.discrete import AXIAL, ROTATION
from verification.models import VerificationRun
from verification.services import VerificationService

from ._output import add_output_arguments, write_report


class Command(BaseCommand):
    help = "Run the BF cylinder pipeline over K = 1..segments and |n| <= modes"

    def add_arguments(self, parser):
        parser.add_argument("--segments", type=int, default=2, help="Largest number of t-segments K")
        parser.add_argument("--modes", type=int, default=1, help="Largest Fourier mode |n|")
        parser.add_argument("--vector", choices=[ROTATION, AXIAL], default=ROTATION,
                            help="Vector field of the equivariant extension")
        parser.add_argument("--order", type=int, default=None, help="Truncation order in u")
        parser.add_argument("--quantize", action="store_true",
                            help="Also run the polarisation and quantum checks")
        parser.add_argument("--save", action="store_true", help="Store the run in the database")
        add_output_arguments(parser)

    def handle(self, *args, **options):
        flags = {key: options[key] for key in ("segments", "modes", "vector", "order", "quantize")}
        try:
            report = VerificationService.run_bf_cylinder(**flags)
        except ValueError as e:
            raise CommandError(str(e))

        if options["save"]:
            run = VerificationService.save_run(
                report,
                kind=VerificationRun.KIND_BF_CYLINDER,
                model_id=f"bf_cylinder_K{flags['segments']}_n{flags['modes']}_{flags['vector']}",
                parameters=flags,
            )
            self.stderr.write(f"Stored run #{run.id}")

        write_report(self, report, options)
