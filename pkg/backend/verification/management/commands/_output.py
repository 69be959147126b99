"""Shared report output for the verification commands."""

from pathlib import Path

from django.core.management.base import CommandError

from verification.report import Report, emit


def add_output_arguments(parser):
    parser.add_argument("--format", choices=["human", "json"], default="human",
                        help="Report format written to stdout")
    parser.add_argument("--json", dest="json_path", default=None,
                        help="Also write the canonical JSON report to this path")
    parser.add_argument("--timing", action="store_true",
                        help="Include wall times (reruns are no longer byte-identical)")


def write_report(command, report: Report, options) -> None:
    """Print the report, optionally save the JSON document, and fail on fail entries."""
    command.stdout.write(emit(report, options["format"], options["timing"]), ending="")
    if options["json_path"]:
        Path(options["json_path"]).write_text(emit(report, "json", options["timing"]), encoding="utf-8")
    if report.exit_code:
        raise CommandError(f"{len(report.failed)} check(s) failed", returncode=report.exit_code)
