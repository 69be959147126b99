"""
Django Admin configuration for stored verification runs.
"""

from django.contrib import admin
from .models import VerificationRun, CheckRecord


class CheckRecordInline(admin.TabularInline):
    """Inline display of report entries within the run admin."""
    model = CheckRecord
    extra = 0
    readonly_fields = ['position', 'check_id', 'model_id', 'status', 'residual', 'wall_time']
    fields = readonly_fields
    can_delete = False

    def has_add_permission(self, request, obj=None):
        return False


@admin.register(VerificationRun)
class VerificationRunAdmin(admin.ModelAdmin):
    """Admin configuration for verification runs."""

    list_display = [
        'model_id',
        'kind',
        'created_at',
        'pass_count',
        'fail_count',
        'skipped_count',
    ]
    list_filter = ['kind', 'created_at']
    search_fields = ['model_id']
    readonly_fields = [
        'created_at',
        'pass_count',
        'fail_count',
        'skipped_count',
        'report',
    ]
    date_hierarchy = 'created_at'
    inlines = [CheckRecordInline]


@admin.register(CheckRecord)
class CheckRecordAdmin(admin.ModelAdmin):
    """Admin configuration for individual report entries."""

    list_display = ['check_id', 'model_id', 'status', 'get_run_id']
    list_filter = ['status', 'check_id']
    search_fields = ['check_id', 'model_id']
    readonly_fields = ['run']

    def get_run_id(self, obj):
        return obj.run_id
    get_run_id.short_description = 'Run'
    get_run_id.admin_order_field = 'run__id'

    def get_queryset(self, request):
        return super().get_queryset(request).select_related('run')
