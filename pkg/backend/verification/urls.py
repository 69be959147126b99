"""
Verification API URL Configuration

All endpoints are prefixed with: /api/
"""

from django.urls import path

from .views import (
    # Checks
    ModelCheckView,
    BfCylinderView,
    PropertySuiteView,

    # Stored runs
    RunListView,
    RunDetailView,
    RunPDFView,

    # Reference data
    ConventionsView,
    PresetListView,
    HealthCheckView,
)

urlpatterns = [

    # -----------------------------------------------------------------
    # SYSTEM & HEALTH
    # -----------------------------------------------------------------

    path(
        "health/",
        HealthCheckView.as_view(),
        name="health-check",
    ),

    # -----------------------------------------------------------------
    # CHECKS
    # -----------------------------------------------------------------

    path(
        "check/",
        ModelCheckView.as_view(),
        name="model-check",
    ),

    path(
        "bf-cylinder/",
        BfCylinderView.as_view(),
        name="bf-cylinder",
    ),

    path(
        "properties/",
        PropertySuiteView.as_view(),
        name="property-suite",
    ),

    # -----------------------------------------------------------------
    # RUNS
    # -----------------------------------------------------------------

    path(
        "runs/",
        RunListView.as_view(),
        name="run-list",
    ),

    path(
        "runs/<int:run_id>/",
        RunDetailView.as_view(),
        name="run-detail",
    ),

    path(
        "runs/<int:run_id>/pdf/",
        RunPDFView.as_view(),
        name="run-pdf",
    ),

    # -----------------------------------------------------------------
    # REFERENCE DATA
    # -----------------------------------------------------------------

    path(
        "conventions/",
        ConventionsView.as_view(),
        name="conventions",
    ),

    path(
        "presets/",
        PresetListView.as_view(),
        name="presets",
    ),
]
