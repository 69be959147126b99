from django.core.management.base import BaseCommand

from verification.models import VerificationRun
from verification.services import BF_CYLINDER, VerificationService


class Command(BaseCommand):
    help = "Store one run per builtin preset so the run list is never empty"

    def handle(self, *args, **options):
        self.stdout.write("Seeding preset runs...")

        for name in VerificationService.presets():
            if VerificationRun.objects.filter(model_id=name).exists():
                self.stdout.write(f"Skipped (already exists): {name}")
                continue

            if name == BF_CYLINDER:
                flags = {"segments": 2, "modes": 1, "vector": "rotation", "order": 2, "quantize": True}
                report = VerificationService.run_bf_cylinder(**flags)
                VerificationService.save_run(report, VerificationRun.KIND_BF_CYLINDER, name, parameters=flags)
            else:
                source = VerificationService.preset_source(name)
                report = VerificationService.run(source)
                VerificationService.save_run(report, VerificationRun.KIND_FILE, name, source=source)

            self.stdout.write(f"Stored {name}: {report.counts()}")

        self.stdout.write(self.style.SUCCESS("Preset runs ready"))
