"""
Verification API Views

REST endpoints for:
- model-file and preset checks
- the BF cylinder builtin
- seeded property sweeps
- stored runs and their PDF reports
- the frozen sign conventions
- health checks
"""

import logging

from django.http import HttpResponse
from django.utils.encoding import iri_to_uri
from django.utils.timezone import now
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.response import Response
from rest_framework.views import APIView

from .exceptions import WorkbenchError
from .models import VerificationRun
from .parser import parse
from .pdf import PDFReportGenerator
from .serializers import (
    BfCylinderRequestSerializer,
    CheckRequestSerializer,
    PropertyRequestSerializer,
    VerificationRunDetailSerializer,
    VerificationRunSerializer,
)
from .services import VerificationService

# ---------------------------------------------------------------------
# Logging (namespaced for verification)
# ---------------------------------------------------------------------

logger = logging.getLogger("verification")


def build_pdf_response(pdf_bytes: bytes, filename: str) -> HttpResponse:
    """
    Standardized PDF download response.
    """
    response = HttpResponse(pdf_bytes, content_type="application/pdf")
    response["Content-Disposition"] = (
        f'attachment; filename="{filename}"; '
        f"filename*=UTF-8''{iri_to_uri(filename)}"
    )
    response["Content-Length"] = len(pdf_bytes)
    response["Cache-Control"] = "no-store, no-cache, must-revalidate"
    return response


def invalid_request(serializer) -> Response:
    return Response(
        {"error": "Invalid request", "details": serializer.errors},
        status=status.HTTP_400_BAD_REQUEST,
    )


def run_response(run: VerificationRun, report) -> Response:
    return Response(
        {
            "run": VerificationRunSerializer(run).data,
            "report": report.to_dict(),
        },
        status=status.HTTP_201_CREATED,
    )


# =====================================================================
# MODEL-FILE CHECKS
# =====================================================================

class ModelCheckView(APIView):
    """
    POST /api/check/

    Parses a model file (or loads a preset), runs its checks and stores the run.
    """

    permission_classes = [AllowAny]

    def post(self, request):
        serializer = CheckRequestSerializer(data=request.data)
        if not serializer.is_valid():
            logger.warning("Invalid check request")
            return invalid_request(serializer)

        data = serializer.validated_data
        try:
            source = data.get("source") or VerificationService.preset_source(data["preset"])
            spec = parse(source)
            report = VerificationService.run(spec, data.get("checks"))
            run = VerificationService.save_run(
                report,
                kind=VerificationRun.KIND_FILE,
                model_id=spec.model_id,
                source=source,
                parameters={"checks": data.get("checks") or spec.checks},
            )
        except WorkbenchError as e:
            logger.warning(f"Model check rejected | {str(e)}")
            return Response(
                {"error": "Model could not be evaluated", "details": str(e)},
                status=status.HTTP_400_BAD_REQUEST,
            )
        except Exception as e:
            logger.exception("Unexpected model check failure")
            return Response(
                {"error": "Internal server error", "details": str(e)},
                status=status.HTTP_500_INTERNAL_SERVER_ERROR,
            )

        logger.info(f"Model check stored | run_id={run.id} | model={run.model_id} | fail={run.fail_count}")
        return run_response(run, report)


# =====================================================================
# BF CYLINDER
# =====================================================================

class BfCylinderView(APIView):
    """
    POST /api/bf-cylinder/
    """

    permission_classes = [AllowAny]

    def post(self, request):
        serializer = BfCylinderRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return invalid_request(serializer)

        flags = dict(serializer.validated_data)
        try:
            report = VerificationService.run_bf_cylinder(**flags)
            run = VerificationService.save_run(
                report,
                kind=VerificationRun.KIND_BF_CYLINDER,
                model_id=f"bf_cylinder_K{flags['segments']}_n{flags['modes']}_{flags['vector']}",
                parameters=flags,
            )
        except WorkbenchError as e:
            return Response(
                {"error": "BF cylinder run failed", "details": str(e)},
                status=status.HTTP_400_BAD_REQUEST,
            )
        except Exception as e:
            logger.exception("Unexpected BF cylinder failure")
            return Response(
                {"error": "Internal server error", "details": str(e)},
                status=status.HTTP_500_INTERNAL_SERVER_ERROR,
            )

        return run_response(run, report)


# =====================================================================
# PROPERTY SWEEPS
# =====================================================================

class PropertySuiteView(APIView):
    """
    POST /api/properties/
    """

    permission_classes = [AllowAny]

    def post(self, request):
        serializer = PropertyRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return invalid_request(serializer)

        data = serializer.validated_data
        report = VerificationService.run_properties(data["kind"], data["samples"], data.get("seed"))
        seed = int(report.entries[0].details["seed"]) if report.entries else None
        run = VerificationService.save_run(
            report,
            kind=VerificationRun.KIND_PROPERTIES,
            model_id=f"properties_{data['kind']}",
            parameters={"kind": data["kind"], "samples": data["samples"]},
            seed=seed,
        )
        return run_response(run, report)


# =====================================================================
# STORED RUNS
# =====================================================================

class RunListView(APIView):
    """
    GET /api/runs/

    Returns the retained runs, newest first.
    """

    permission_classes = [AllowAny]

    def get(self, request):
        runs = VerificationRun.objects.all()
        serializer = VerificationRunSerializer(runs, many=True)
        return Response(
            {
                "count": len(serializer.data),
                "runs": serializer.data,
                "server_time": now(),
            }
        )


class RunDetailView(APIView):
    """
    GET /api/runs/<run_id>/
    DELETE /api/runs/<run_id>/
    """

    permission_classes = [AllowAny]

    def get(self, request, run_id):
        try:
            run = VerificationRun.objects.prefetch_related("entries").get(id=run_id)
        except VerificationRun.DoesNotExist:
            return Response({"error": "Run not found"}, status=status.HTTP_404_NOT_FOUND)
        return Response(VerificationRunDetailSerializer(run).data)

    def delete(self, request, run_id):
        deleted, _ = VerificationRun.objects.filter(id=run_id).delete()
        if not deleted:
            return Response({"error": "Run not found"}, status=status.HTTP_404_NOT_FOUND)
        logger.info(f"Run deleted | run_id={run_id}")
        return Response(status=status.HTTP_204_NO_CONTENT)


class RunPDFView(APIView):
    """
    GET /api/runs/<run_id>/pdf/
    """

    permission_classes = [AllowAny]

    def get(self, request, run_id):
        try:
            run = VerificationRun.objects.get(id=run_id)
        except VerificationRun.DoesNotExist:
            return Response({"error": "Run not found"}, status=status.HTTP_404_NOT_FOUND)

        pdf_bytes = PDFReportGenerator(run).generate()
        safe_name = run.model_id.replace(" ", "_").replace("/", "_")
        logger.info(f"PDF generated | run_id={run.id}")
        return build_pdf_response(pdf_bytes, f"Verification_Report_{safe_name}_{run.id}.pdf")


# =====================================================================
# REFERENCE DATA
# =====================================================================

class ConventionsView(APIView):
    """
    GET /api/conventions/
    """

    permission_classes = [AllowAny]

    def get(self, request):
        return Response(VerificationService.conventions())


class PresetListView(APIView):
    """
    GET /api/presets/
    """

    permission_classes = [AllowAny]

    def get(self, request):
        return Response({"presets": VerificationService.presets()})


class HealthCheckView(APIView):
    """
    GET /api/health/
    """

    permission_classes = [AllowAny]

    def get(self, request):
        return Response(
            {
                "status": "healthy",
                "service": "BV-BFV Verification Workbench API",
                "timestamp": now(),
            }
        )
