"""
PDF Report Generation Module.

Renders a stored verification run with ReportLab: run metadata, a status
summary and the per-check table with residuals wrapped in paragraphs.
"""

import io
from datetime import datetime
from typing import List
from xml.sax.saxutils import escape

from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet, ParagraphStyle
from reportlab.lib.units import inch
from reportlab.platypus import (
    SimpleDocTemplate,
    Paragraph,
    Spacer,
    Table,
    TableStyle,
)

from .models import VerificationRun

STATUS_COLORS = {
    'pass': colors.HexColor('#276749'),
    'fail': colors.HexColor('#c53030'),
    'skipped': colors.HexColor('#718096'),
}

HEADER_STYLE = [
    ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#2d3748')),
    ('TEXTCOLOR', (0, 0), (-1, 0), colors.white),
    ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
    ('FONTSIZE', (0, 0), (-1, 0), 9),
    ('ALIGN', (0, 0), (-1, 0), 'CENTER'),
    ('GRID', (0, 0), (-1, -1), 0.25, colors.HexColor('#e2e8f0')),
    ('TOPPADDING', (0, 0), (-1, -1), 4),
    ('BOTTOMPADDING', (0, 0), (-1, -1), 4),
]


class PDFReportGenerator:
    """
    Generates the PDF report of one verification run.
    """

    def __init__(self, run: VerificationRun):
        self.run = run
        self.styles = getSampleStyleSheet()
        self._setup_custom_styles()

    def _setup_custom_styles(self):
        """Configure custom paragraph styles for the report."""
        self.styles.add(ParagraphStyle(
            name='ReportTitle',
            parent=self.styles['Title'],
            fontSize=22,
            spaceAfter=24,
            textColor=colors.HexColor('#1a365d'),
        ))

        self.styles.add(ParagraphStyle(
            name='SectionHeader',
            parent=self.styles['Heading2'],
            fontSize=14,
            spaceBefore=18,
            spaceAfter=10,
            textColor=colors.HexColor('#2d3748'),
        ))

        self.styles.add(ParagraphStyle(
            name='ReportBody',
            parent=self.styles['Normal'],
            fontSize=10,
            spaceAfter=6,
            textColor=colors.HexColor('#4a5568'),
        ))

        self.styles.add(ParagraphStyle(
            name='Cell',
            parent=self.styles['Normal'],
            fontName='Courier',
            fontSize=7,
            leading=9,
        ))

    def _create_header(self) -> List:
        run = self.run
        elements = [Paragraph("BV-BFV Verification Report", self.styles['ReportTitle'])]
        rows = [
            ('Model', run.model_id),
            ('Kind', run.get_kind_display()),
            ('Run', f"#{run.id} at {run.created_at.strftime('%Y-%m-%d %H:%M UTC')}"),
            ('Generated', datetime.now().strftime('%Y-%m-%d %H:%M UTC')),
        ]
        if run.seed is not None:
            rows.append(('Seed', str(run.seed)))
        if run.parameters:
            rows.append(('Parameters', ', '.join(f"{k}={v}" for k, v in sorted(run.parameters.items()))))
        for label, value in rows:
            elements.append(Paragraph(f"<b>{label}:</b> {escape(str(value))}", self.styles['ReportBody']))
        elements.append(Spacer(1, 12))
        return elements

    def _create_status_table(self) -> Table:
        run = self.run
        data = [
            ['Pass', 'Fail', 'Skipped', 'Exit status'],
            [str(run.pass_count), str(run.fail_count), str(run.skipped_count), '0' if run.passed else '1'],
        ]
        table = Table(data, colWidths=[1.2 * inch] * 4)
        table.setStyle(TableStyle(HEADER_STYLE + [
            ('ALIGN', (0, 1), (-1, -1), 'CENTER'),
            ('BACKGROUND', (0, 1), (-1, -1), colors.HexColor('#f7fafc')),
        ]))
        return table

    def _create_entries_table(self) -> List:
        entries = list(self.run.entries.all())
        if not entries:
            return [Paragraph("No checks were recorded.", self.styles['ReportBody'])]

        cell = self.styles['Cell']
        data = [['Check', 'Model', 'Status', 'Residual / reason']]
        for entry in entries:
            text = entry.residual or entry.details.get('reason', '') or '0'
            data.append([
                Paragraph(escape(entry.check_id), cell),
                Paragraph(escape(entry.model_id), cell),
                entry.status,
                Paragraph(escape(text), cell),
            ])

        table = Table(data, colWidths=[1.3 * inch, 1.6 * inch, 0.7 * inch, 3.2 * inch], repeatRows=1)
        style = HEADER_STYLE + [
            ('FONTSIZE', (0, 1), (-1, -1), 8),
            ('VALIGN', (0, 1), (-1, -1), 'TOP'),
        ]
        for row, entry in enumerate(entries, start=1):
            style.append(('TEXTCOLOR', (2, row), (2, row), STATUS_COLORS.get(entry.status, colors.black)))
            if row % 2 == 0:
                style.append(('BACKGROUND', (0, row), (-1, row), colors.HexColor('#f7fafc')))
        table.setStyle(TableStyle(style))
        return [table]

    def generate(self) -> bytes:
        """
        Generate the complete PDF report.

        Returns:
            PDF content as bytes
        """
        buffer = io.BytesIO()
        doc = SimpleDocTemplate(
            buffer,
            pagesize=A4,
            rightMargin=0.6 * inch,
            leftMargin=0.6 * inch,
            topMargin=0.75 * inch,
            bottomMargin=0.75 * inch,
        )

        elements = []
        elements.extend(self._create_header())
        elements.append(Paragraph("Summary", self.styles['SectionHeader']))
        elements.append(self._create_status_table())
        elements.append(Paragraph("Checks", self.styles['SectionHeader']))
        elements.extend(self._create_entries_table())

        if self.run.source:
            elements.append(Paragraph("Model File", self.styles['SectionHeader']))
            for line in self.run.source.splitlines():
                elements.append(Paragraph(escape(line) or '&nbsp;', self.styles['Cell']))

        doc.build(elements)
        return buffer.getvalue()
