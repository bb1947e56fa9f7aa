"""Comparison-table output: per-image metric tables and the method benchmark."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .metrics.quality import MetricReport

BENCH_HEADER = ["Method", "SAM", "SID", "SCP", "SSIM", "Edge", "ESR", "REF", "PSNR", "RMSE", "QualityIndex", "WallTimeSec"]
_BENCH_KEYS = ["sam", "sid", "scp", "ssim", "edge", "esr", "ref", "psnr", "rmse"]

METRIC_LABELS = {
    "sam": "Spectral Angle Mapper (SAM)",
    "sid": "Spectral Information Divergence",
    "scp": "Spectral Content Preservation",
    "ssim": "Structural Similarity Index (SSIM)",
    "edge": "Edge Preservation",
    "esr": "Effective Spatial Resolution (ESR)",
    "ref": "Resolution Enhancement Factor",
    "psnr": "Peak Signal-to-Noise Ratio (dB)",
    "rmse": "Root Mean Square Error",
}


def fmt(v) -> str:
    """Locale-free, 9 significant digits; infinities spelled ``inf``."""
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return f"{v:.9g}"


@dataclass
class BenchRow:
    method: str
    report: MetricReport | None
    wall_time: float
    error: str | None = None

    def cells(self) -> list[str]:
        if self.report is None:
            return [self.method] + [""] * (len(BENCH_HEADER) - 2) + [fmt(self.wall_time)]
        raw = self.report.raw
        return (
            [self.method]
            + [fmt(raw.get(k)) for k in _BENCH_KEYS]
            + [fmt(self.report.quality_index), fmt(self.wall_time)]
        )

    def to_dict(self) -> dict:
        d = {"method": self.method, "wall_time": float(fmt(self.wall_time))}
        if self.report is None:
            d["error"] = self.error
        else:
            d["report"] = self.report.to_dict()
        return d


def metric_table(report: MetricReport) -> str:
    """Two-column ``Metric,Value`` CSV, one row per computed metric plus the Quality Index."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Metric", "Value"])
    for key, label in METRIC_LABELS.items():
        if key in report.raw:
            w.writerow([label, fmt(report.raw[key])])
    w.writerow(["Quality Index", fmt(report.quality_index)])
    return buf.getvalue()


def bench_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_HEADER)
    for row in rows:
        w.writerow(row.cells())
    return buf.getvalue()


def bench_markdown(rows: list[BenchRow]) -> str:
    lines = [
        "| " + " | ".join(BENCH_HEADER) + " |",
        "|" + "|".join(["---"] + ["---:"] * (len(BENCH_HEADER) - 1)) + "|",
    ]
    for row in rows:
        cells = row.cells()
        if row.report is None:
            cells[1] = "error: " + str(row.error).replace("|", "\\|")
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def bench_json(rows: list[BenchRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2) + "\n"


FORMATTERS = {"csv": bench_csv, "md": bench_markdown, "json": bench_json}
