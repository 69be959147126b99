from django.conf import settings
from rest_framework import serializers

from .discrete import AXIAL, ROTATION
from .models import CheckRecord, VerificationRun
from .parser import CHECKS
from .properties import SAMPLERS


# ================================
# Check Record Serializer
# ================================
class CheckRecordSerializer(serializers.ModelSerializer):
    """
    One report entry of a stored run.
    """

    class Meta:
        model = CheckRecord
        fields = [
            "position",
            "check_id",
            "model_id",
            "status",
            "residual",
            "anchor",
            "details",
            "wall_time",
        ]
        read_only_fields = fields


# ================================
# Run List Serializer
# ================================
class VerificationRunSerializer(serializers.ModelSerializer):
    """
    Lightweight run serializer (no entries), used for the run list.
    """

    passed = serializers.BooleanField(read_only=True)

    class Meta:
        model = VerificationRun
        fields = [
            "id",
            "kind",
            "model_id",
            "parameters",
            "seed",
            "created_at",
            "pass_count",
            "fail_count",
            "skipped_count",
            "passed",
        ]
        read_only_fields = fields


# ================================
# Run Detail Serializer
# ================================
class VerificationRunDetailSerializer(serializers.ModelSerializer):
    """
    Full run including the source text and every entry.
    """

    entries = CheckRecordSerializer(many=True, read_only=True)
    passed = serializers.BooleanField(read_only=True)

    class Meta:
        model = VerificationRun
        fields = [
            "id",
            "kind",
            "model_id",
            "source",
            "parameters",
            "seed",
            "created_at",
            "pass_count",
            "fail_count",
            "skipped_count",
            "passed",
            "entries",
        ]
        read_only_fields = fields


# ================================
# Request Serializers
# ================================
class CheckRequestSerializer(serializers.Serializer):
    """
    Model-file text, or a preset name, plus optional checks.
    """

    source = serializers.CharField(required=False, allow_blank=False, trim_whitespace=False)
    preset = serializers.CharField(required=False)
    checks = serializers.ListField(
        child=serializers.ChoiceField(choices=CHECKS),
        required=False,
        allow_empty=True,
    )

    def validate(self, attrs):
        if bool(attrs.get("source")) == bool(attrs.get("preset")):
            raise serializers.ValidationError("Provide exactly one of 'source' or 'preset'.")
        return attrs


class BfCylinderRequestSerializer(serializers.Serializer):
    """
    Flags of the BF cylinder builtin.
    """

    segments = serializers.IntegerField(min_value=1, default=2)
    modes = serializers.IntegerField(min_value=0, default=1)
    vector = serializers.ChoiceField(choices=[ROTATION, AXIAL], default=ROTATION)
    order = serializers.IntegerField(min_value=1, required=False)
    quantize = serializers.BooleanField(default=False)

    def validate_segments(self, value):
        limit = settings.WORKBENCH.get("MAX_SEGMENTS", 4)
        if value > limit:
            raise serializers.ValidationError(f"At most {limit} segments are served over the API.")
        return value

    def validate_modes(self, value):
        limit = settings.WORKBENCH.get("MAX_MODES", 3)
        if value > limit:
            raise serializers.ValidationError(f"At most |n| = {limit} is served over the API.")
        return value


class PropertyRequestSerializer(serializers.Serializer):
    """
    A seeded property sweep.
    """

    kind = serializers.ChoiceField(choices=list(SAMPLERS) + ["all"], default="all")
    samples = serializers.IntegerField(min_value=0, max_value=500, default=20)
    seed = serializers.IntegerField(required=False)
