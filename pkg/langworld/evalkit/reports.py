"""results.csv, results.json and cdf.svg for a set of evaluation runs.

All three are byte-identical for identical inputs: JSON is written with
sorted keys and the SVG carries a fixed hash salt and no date.
"""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from langworld.evalkit.schemas import ReportRowSchema, ReportSchema  # noqa: E402
from langworld.utils import read_json, write_csv, write_json  # noqa: E402

logger = logging.getLogger(__name__)

CSV_FIELDS = ("policy", "task", "n", "success_rate", "min", "max")
FORMATS = ("csv", "json", "svg")
FILENAMES = {"csv": "results.csv", "json": "results.json", "svg": "cdf.svg"}

_STYLE = {
    "svg.hashsalt": "langworld",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "axes.unicode_minus": False,
}


def render_cdf(bands, path, title="Success rate over tasks"):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(6, 4))
        for band in bands:
            ranks = [point.rank for point in band.points]
            line, = ax.plot(ranks, [point.level for point in band.points],
                            marker="o", markersize=3, label=band.policy)
            ax.fill_between(ranks, band.low, band.high, color=line.get_color(),
                            alpha=0.2, linewidth=0)
        ax.set_xlabel("tasks")
        ax.set_ylabel("success rate")
        ax.set_ylim(-0.02, 1.02)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        if bands:
            ax.legend(loc="upper right", fontsize=8)
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path


def write_report(rows, bands, out, formats=FORMATS, runs=None):
    """Write the requested report files into ``out``; returns their paths."""
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError("unknown report formats: %s" % ", ".join(sorted(unknown)))
    out = Path(out)
    written = []
    if "csv" in formats:
        written.append(write_csv(
            out / FILENAMES["csv"], CSV_FIELDS, ReportRowSchema(many=True).dump(rows)
        ))
    if "json" in formats:
        record = {"rows": rows, "cdf": bands, "results": runs or []}
        written.append(write_json(out / FILENAMES["json"], ReportSchema().dump(record)))
    if "svg" in formats:
        written.append(render_cdf(bands, out / FILENAMES["svg"]))
    logger.info("report written to %s", out)
    return written


def read_report(path):
    """Rows, CDF bands and raw runs from a ``results.json`` mirror."""
    report = ReportSchema().load(read_json(path))
    return report["rows"], report["cdf"], report["results"]
