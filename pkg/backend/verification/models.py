"""
Persisted verification runs.

A run stores the canonical JSON report it produced together with one
CheckRecord per entry, so reports can be listed, re-emitted and rendered
to PDF without re-running the algebra.
"""

from django.db import models
from django.utils import timezone
from django.conf import settings


class VerificationRun(models.Model):
    """
    One invocation of a model file or a builtin model family.
    """

    KIND_FILE = "file"
    KIND_BF_CYLINDER = "bf_cylinder"
    KIND_PROPERTIES = "properties"
    KIND_CHOICES = [
        (KIND_FILE, "Model file"),
        (KIND_BF_CYLINDER, "BF cylinder grid"),
        (KIND_PROPERTIES, "Property sweep"),
    ]

    kind = models.CharField(
        max_length=20,
        choices=KIND_CHOICES,
        help_text="What was verified",
    )

    model_id = models.CharField(
        max_length=255,
        help_text="Model identifier from the file or the builtin flags",
    )

    source = models.TextField(
        blank=True,
        default="",
        help_text="Model-file text, empty for builtin runs",
    )

    parameters = models.JSONField(
        default=dict,
        blank=True,
        help_text="Requested checks or builtin flags",
    )

    seed = models.IntegerField(
        null=True,
        blank=True,
        help_text="Seed of the randomized property sweeps, if any",
    )

    created_at = models.DateTimeField(
        default=timezone.now,
        db_index=True,
        help_text="Run timestamp",
    )

    pass_count = models.PositiveIntegerField(
        default=0,
        help_text="Number of passing entries",
    )

    fail_count = models.PositiveIntegerField(
        default=0,
        help_text="Number of failing entries",
    )

    skipped_count = models.PositiveIntegerField(
        default=0,
        help_text="Number of skipped entries",
    )

    report = models.JSONField(
        default=dict,
        help_text="Canonical machine report",
    )

    class Meta:
        ordering = ["-created_at", "-id"]
        verbose_name = "Verification Run"
        verbose_name_plural = "Verification Runs"
        indexes = [
            models.Index(fields=["kind", "-created_at"], name="verif_run_kind_created_idx"),
        ]

    def __str__(self):
        return f"{self.model_id} ({self.created_at:%Y-%m-%d %H:%M})"

    @property
    def passed(self) -> bool:
        return self.fail_count == 0

    def save(self, *args, **kwargs):
        """
        Save the run and enforce the retention policy after inserting.
        """
        is_new = self.pk is None
        super().save(*args, **kwargs)

        if is_new:
            self._enforce_retention_limit()

    def _enforce_retention_limit(self):
        """
        Keep only the latest N runs; older ones are deleted by id.
        """
        limit = settings.WORKBENCH.get("MAX_RUNS_RETAINED", 20)

        ids_to_delete = list(
            VerificationRun.objects
            .order_by("-created_at", "-id")
            .values_list("id", flat=True)[limit:]
        )

        if ids_to_delete:
            VerificationRun.objects.filter(id__in=ids_to_delete).delete()


class CheckRecord(models.Model):
    """
    One report entry of a run.
    """

    run = models.ForeignKey(
        VerificationRun,
        on_delete=models.CASCADE,
        related_name="entries",
        help_text="Parent run",
    )

    position = models.PositiveIntegerField(
        help_text="Index of the entry in the report",
    )

    check_id = models.CharField(
        max_length=100,
        help_text="Check identifier",
    )

    model_id = models.CharField(
        max_length=255,
        help_text="Model the check was run on",
    )

    status = models.CharField(
        max_length=10,
        help_text="pass, fail or skipped",
    )

    residual = models.TextField(
        blank=True,
        default="",
        help_text="Normalised residual, empty when it vanishes",
    )

    anchor = models.CharField(
        max_length=255,
        blank=True,
        default="",
        help_text="The identity the check verifies",
    )

    details = models.JSONField(
        default=dict,
        blank=True,
        help_text="Auxiliary values such as ghost numbers or skip reasons",
    )

    wall_time = models.FloatField(
        default=0.0,
        help_text="Seconds spent on the check",
    )

    class Meta:
        ordering = ["position"]
        verbose_name = "Check Record"
        verbose_name_plural = "Check Records"
        indexes = [
            models.Index(fields=["run", "status"], name="verif_check_run_status_idx"),
        ]

    def __str__(self):
        return f"{self.check_id} on {self.model_id}: {self.status}"
