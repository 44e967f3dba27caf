from django.contrib import admin
from django.utils.html import format_html

from .models import CheckResult, ExperimentRun


class CheckResultInline(admin.TabularInline):
    model = CheckResult
    extra = 0
    can_delete = False
    fields = ('name', 'oracle_kind', 'oracle_value', 'estimate', 'std_error', 'tolerance', 'passed', 'hard')
    readonly_fields = fields


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ('id', 'kind', 'seed', 'check_count', 'get_status', 'created_at')
    list_filter = ('kind', 'passed', 'created_at')
    search_fields = ('kind', 'output_dir')
    readonly_fields = ('created_at',)
    ordering = ('-created_at',)
    list_per_page = 25
    inlines = [CheckResultInline]

    fieldsets = (
        ('Run', {
            'fields': ('kind', 'seed', 'passed', 'check_count', 'failed_count')
        }),
        ('Artifacts', {
            'fields': ('output_dir', 'config')
        }),
        ('Timestamps', {
            'fields': ('created_at',),
            'classes': ('collapse',)
        }),
    )

    def get_status(self, obj):
        if obj.passed:
            return format_html('<span style="color: #28a745; font-weight: bold;">✓ Passed</span>')
        return format_html(
            '<span style="color: #dc3545; font-weight: bold;">✗ {} failed</span>', obj.failed_count
        )
    get_status.short_description = 'Status'
    get_status.admin_order_field = 'passed'


@admin.register(CheckResult)
class CheckResultAdmin(admin.ModelAdmin):
    list_display = ('id', 'run', 'name', 'oracle_kind', 'estimate', 'oracle_value', 'passed', 'hard')
    list_filter = ('passed', 'hard', 'oracle_kind')
    search_fields = ('name', 'run__kind')
    list_per_page = 50

    def get_queryset(self, request):
        return super().get_queryset(request).select_related('run')
