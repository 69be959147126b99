from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from verification.exceptions import WorkbenchError
from verification.models import VerificationRun
from verification.parser import CHECKS, parse
from verification.properties import SAMPLERS
from verification.services import BF_CYLINDER, VerificationService

from ._output import add_output_arguments, write_report


class Command(BaseCommand):
    help = "Run the checks of a model file or preset and print the report"

    def add_arguments(self, parser):
        parser.add_argument("model", help="Path to a .bv model file, or a preset name")
        parser.add_argument("--check", dest="checks", action="append", choices=CHECKS,
                            help="Check to run (repeatable); defaults to the file's check lines")
        parser.add_argument("--seed", type=int, default=None,
                            help="Seed of the randomized property sweeps")
        parser.add_argument("--properties", choices=list(SAMPLERS) + ["all"], default=None,
                            help="Also run a seeded property sweep")
        parser.add_argument("--samples", type=int, default=0,
                            help="Samples per property sweep (0 uses the default size)")
        parser.add_argument("--save", action="store_true", help="Store the run in the database")
        add_output_arguments(parser)

    def handle(self, *args, **options):
        source = self._load(options["model"])
        try:
            spec = parse(source)
            report = VerificationService.run(spec, options["checks"])
        except WorkbenchError as e:
            raise CommandError(str(e))

        if options["properties"] or options["seed"] is not None:
            sweeps = VerificationService.run_properties(
                options["properties"] or "all", options["samples"], options["seed"],
            )
            report.extend(sweeps)

        if options["save"]:
            run = VerificationService.save_run(
                report,
                kind=VerificationRun.KIND_FILE,
                model_id=spec.model_id,
                source=source,
                parameters={"checks": options["checks"] or spec.checks},
                seed=options["seed"],
            )
            self.stderr.write(f"Stored run #{run.id}")

        write_report(self, report, options)

    @staticmethod
    def _load(model: str) -> str:
        path = Path(model)
        if path.is_file():
            return path.read_text(encoding="utf-8")
        if model == BF_CYLINDER:
            raise CommandError("The BF cylinder builtin runs through the bf_cylinder command")
        if model in VerificationService.presets():
            return VerificationService.preset_source(model)
        raise CommandError(f"No model file or preset named '{model}'")
