import json

from django.core.management.base import BaseCommand

from verification.services import VerificationService


class Command(BaseCommand):
    help = "Print the frozen sign conventions and the live ratios of the closed BF model"

    def add_arguments(self, parser):
        parser.add_argument("--json", action="store_true", help="Print as JSON")

    def handle(self, *args, **options):
        table = VerificationService.conventions()
        if options["json"]:
            self.stdout.write(json.dumps(table, indent=2, ensure_ascii=False))
            return

        width = max(len(row["name"]) for row in table["signs"])
        for row in table["signs"]:
            self.stdout.write(f"{row['name']:<{width}}  {row['formula']}    ({row['note']})")
        ratios = table["ratios"]
        self.stdout.write("")
        self.stdout.write(f"live on {ratios['model']}:")
        self.stdout.write(f"  T / (u S_L)             = {ratios['T/(u S_L)']}")
        self.stdout.write(f"  (S_hat,S_hat) / (u S_L) = {ratios['(S_hat,S_hat)/(u S_L)']}")
