"""CSV and JSON emission of distortion reports.

File names carry short hashes of the presentation text and of the subgroup generators, so
two runs over the same input write to the same files and different inputs never collide.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
from logging import getLogger
from pathlib import Path

from ..amalgam import AmalgamPresentation
from ..constants import REPORT_HEADER
from ..fileformat import dump_presentation
from .verdict import DistortionReport

logger = getLogger(__name__)

CSV_COLUMNS = ("radius", "ball_size", "h_elements", "fitted_C_add", "fitted_C_mul", "epsilon", "stabilized")


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:10]


def report_stem(P: AmalgamPresentation, report: DistortionReport) -> str:
    name = (P.name or "presentation").replace(":", "-").replace(",", "-")
    return f"{name}-{_digest(dump_presentation(P))}-{_digest(','.join(report.subgroup))}"


def _number(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def render_csv(report: DistortionReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        stabilized = "" if row.stabilized is None else str(row.stabilized).lower()
        writer.writerow([row.radius, row.ball_size, row.h_elements, _number(row.fitted_C_add),
                         _number(row.fitted_C_mul), _number(row.epsilon), stabilized])
    return buffer.getvalue()


def report_document(report: DistortionReport) -> dict:
    return {
        "header": REPORT_HEADER,
        "presentation": report.presentation,
        "subgroup": report.subgroup,
        "budgets": report.budgets._asdict(),
        "seed": report.seed,
        "rows": [
            {
                "radius": row.radius,
                "ball_size": row.ball_size,
                "h_elements": row.h_elements,
                "max_ratio": _number(row.max_ratio),
                "fitted_C": _number(row.fitted_C),
                "fitted_C_add": row.fitted_C_add,
                "fitted_C_mul": _number(row.fitted_C_mul),
                "epsilon": row.epsilon,
                "epsilon_is_lower_bound": True,
                "stabilized": row.stabilized,
            }
            for row in report.rows
        ],
        "structural": report.structural,
        "diagnostics": report.diagnostics,
        "verdict": report.verdict.value,
        "partial": report.partial,
    }


def render_json(report: DistortionReport) -> str:
    return json.dumps(report_document(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_report(P: AmalgamPresentation, report: DistortionReport, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    stem = report_stem(P, report)
    paths = [out / f"{stem}.csv", out / f"{stem}.json"]
    paths[0].write_text(render_csv(report), encoding="utf-8")
    paths[1].write_text(render_json(report), encoding="utf-8")
    logger.info("report written to %s", ", ".join(str(p) for p in paths))
    return paths
