"""
Report Generator
Renders verification results as schema-versioned JSON, markdown and PDF reports
"""

import json
import logging
import math
import os
from datetime import datetime
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from reportlab.lib import colors
from reportlab.lib.enums import TA_CENTER
from reportlab.lib.pagesizes import letter
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from scalars import FormalScalar, format_rational

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def to_jsonable(value):
    """Plain JSON values: rationals as "p/q", complex as {re, im}, non-finite floats as strings"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, FormalScalar):
        return value.to_records()
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_jsonable(float(value.real)), "im": to_jsonable(float(value.imag))}
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, pd.DataFrame):
        return to_jsonable(value.to_dict(orient="records"))
    return value


def table_frame(rows: List[Dict]) -> pd.DataFrame:
    """Rows of a numeric table as a DataFrame, columns in first-seen order"""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return pd.DataFrame(rows, columns=columns)


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


class ReportGenerator:
    """Generates verification reports from a result dictionary"""

    def __init__(self, output_dir: str = "reports"):
        self.output_dir = output_dir

    def _default_path(self, report: Dict, extension: str) -> str:
        os.makedirs(self.output_dir, exist_ok=True)
        name = "_".join(str(part) for part in (report.get("command"), report.get("which")) if part)
        return os.path.join(self.output_dir, f"{name or 'report'}.{extension}")

    def render_json(self, report: Dict) -> str:
        """Deterministic JSON: sorted keys, no timestamps"""
        document = {"schema": SCHEMA_VERSION}
        document.update(to_jsonable(report))
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def generate_json(self, report: Dict, output_path: Optional[str] = None) -> str:
        output_path = output_path or self._default_path(report, "json")
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(self.render_json(report))
        logger.info("JSON report saved: %s", output_path)
        return output_path

    def generate_markdown(self, report: Dict, output_path: Optional[str] = None) -> str:
        output_path = output_path or self._default_path(report, "md")
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(self.render_markdown(report))
        logger.info("Markdown report saved: %s", output_path)
        return output_path

    def generate_pdf(self, report: Dict, output_path: Optional[str] = None) -> str:
        output_path = output_path or self._default_path(report, "pdf")
        doc = SimpleDocTemplate(output_path, pagesize=letter,
                                rightMargin=72, leftMargin=72,
                                topMargin=72, bottomMargin=18)
        doc.build(self._build_pdf_content(report))
        logger.info("PDF report saved: %s", output_path)
        return output_path

    def render_markdown(self, report: Dict) -> str:
        title = report.get("command", "report")
        if report.get("which"):
            title += f" {report['which']}"
        verdict = "✅ PASS" if report.get("passed") else "❌ FAIL"

        md = f"# 📊 Chern-Simons verification: {title}\n\n"
        if report.get("algebra"):
            md += f"**Algebra:** {report['algebra']}  \n"
        md += f"**Verdict:** {verdict}\n\n---\n\n"

        parameters = report.get("parameters") or {}
        if parameters:
            md += "## ⚙️ Parameters\n\n"
            for key in sorted(parameters):
                md += f"- **{key}:** {_cell(parameters[key])}\n"
            md += "\n"

        checks = report.get("checks") or []
        if checks:
            md += "## 🔍 Checks\n\n"
            for i, check in enumerate(checks, 1):
                mark = "✅" if check.get("passed") else "❌"
                md += f"{i}. {mark} **{check.get('name')}**"
                if check.get("detail"):
                    md += f": {check['detail']}"
                md += "\n"
            md += "\n"

        for name, rows in (report.get("tables") or {}).items():
            frame = table_frame(rows)
            md += f"## 🧮 {name}\n\n"
            md += "| " + " | ".join(frame.columns) + " |\n"
            md += "|" + "---|" * len(frame.columns) + "\n"
            for record in frame.itertuples(index=False):
                md += "| " + " | ".join(_cell(v) for v in record) + " |\n"
            md += "\n"

        if report.get("failure"):
            md += f"**First failure:** {report['failure']}\n\n"

        md += "---\n\n"
        md += f"*Report generated on {datetime.now().strftime('%B %d, %Y at %I:%M %p')}*\n"
        return md

    def _build_pdf_content(self, report: Dict):
        story = []
        styles = getSampleStyleSheet()

        title_style = ParagraphStyle(
            'CustomTitle',
            parent=styles['Heading1'],
            fontSize=20,
            textColor=colors.HexColor('#1a73e8'),
            spaceAfter=24,
            alignment=TA_CENTER
        )
        heading_style = ParagraphStyle(
            'CustomHeading',
            parent=styles['Heading2'],
            fontSize=14,
            textColor=colors.HexColor('#1a73e8'),
            spaceAfter=12,
            spaceBefore=12
        )

        title = report.get("command", "report") + (f" {report['which']}" if report.get("which") else "")
        story.append(Paragraph(f"Chern-Simons verification: {title}", title_style))

        meta = [['Verdict:', "PASS" if report.get("passed") else "FAIL"]]
        if report.get("algebra"):
            meta.insert(0, ['Algebra:', report['algebra']])
        for key in sorted(report.get("parameters") or {}):
            meta.append([f"{key}:", _cell(report['parameters'][key])])
        meta_table = Table(meta, colWidths=[2*inch, 4*inch])
        meta_table.setStyle(TableStyle([
            ('FONTNAME', (0, 0), (-1, -1), 'Helvetica'),
            ('FONTSIZE', (0, 0), (-1, -1), 10),
            ('TEXTCOLOR', (0, 0), (0, -1), colors.grey),
            ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
            ('BOTTOMPADDING', (0, 0), (-1, -1), 6),
        ]))
        story.append(meta_table)
        story.append(Spacer(1, 0.3*inch))

        checks = report.get("checks") or []
        if checks:
            story.append(Paragraph("Checks", heading_style))
            for i, check in enumerate(checks, 1):
                mark = "pass" if check.get("passed") else "FAIL"
                text = f"<b>{i}. {check.get('name')}</b> ({mark})"
                if check.get("detail"):
                    text += f"<br/>{check['detail']}"
                story.append(Paragraph(text, styles['Normal']))
                story.append(Spacer(1, 0.1*inch))

        for name, rows in (report.get("tables") or {}).items():
            frame = table_frame(rows)
            story.append(Paragraph(name, heading_style))
            data = [list(frame.columns)] + [[_cell(v) for v in record] for record in frame.itertuples(index=False)]
            table = Table(data)
            table.setStyle(TableStyle([
                ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
                ('FONTSIZE', (0, 0), (-1, -1), 8),
                ('GRID', (0, 0), (-1, -1), 0.25, colors.grey),
            ]))
            story.append(table)
            story.append(Spacer(1, 0.2*inch))

        story.append(Spacer(1, 0.3*inch))
        footer_text = f"<i>Report generated on {datetime.now().strftime('%B %d, %Y at %I:%M %p')}</i>"
        story.append(Paragraph(footer_text, styles['Normal']))
        return story


if __name__ == "__main__":
    sample = {
        "command": "numeric",
        "which": "zeta-trace",
        "passed": True,
        "parameters": {"K": 8192, "n": 2},
        "checks": [{"name": "zeta-trace n=2", "passed": True, "detail": "relative error 1.2e-05"}],
        "tables": {"convergence": [{"epsilon": 1e-2, "value": 0.1}, {"epsilon": 1e-3, "value": 0.11}]},
    }
    generator = ReportGenerator()
    print(generator.render_json(sample))
    generator.generate_markdown(sample)
    print("✅ Sample reports generated!")
