"""
URL configuration for bvbfv_workbench project.

All API endpoints are prefixed with /api/.
"""

from django.contrib import admin
from django.urls import path, include
from django.http import JsonResponse, HttpResponseRedirect


def api_root(request):
    """
    Root API landing endpoint listing the available services.
    """
    return JsonResponse(
        {
            "service": "BV-BFV Verification Workbench API",
            "status": "running",
            "endpoints": {
                "check": "/api/check/",
                "bf_cylinder": "/api/bf-cylinder/",
                "properties": "/api/properties/",
                "runs": "/api/runs/",
                "run": "/api/runs/<run_id>/",
                "pdf": "/api/runs/<run_id>/pdf/",
                "conventions": "/api/conventions/",
                "presets": "/api/presets/",
                "health": "/api/health/",
            },
        }
    )


def root_redirect(request):
    return HttpResponseRedirect("/api/")


urlpatterns = [
    path("", root_redirect, name="root"),
    path("admin/", admin.site.urls),
    path("api/", api_root, name="api-root"),
    path("api/", include("verification.urls")),
]
