"""Report emission: json-lines (stable key order, machine-diffable),
csv, and plot-data (x, y series keyed by scenario kind), plus a small
figure renderer for the CLI's --out path.

Timing never enters the payload, so identical runs serialize to
identical bytes.
"""
from __future__ import annotations

import csv
import io
import json

FORMATS = ("json-lines", "csv", "plot-data")

_CSV_COLUMNS = ("name", "kind", "seed", "version", "passed", "bound", "observed", "ratio", "error")


def _json_safe(value: float):
    """Non-finite reals as strings: strict JSON has no Infinity token."""
    if isinstance(value, float) and not (value == value and abs(value) != float("inf")):
        return repr(value)
    return value


def _report_dict(rep) -> dict:
    return {
        "name": rep.name,
        "kind": rep.kind,
        "seed": rep.seed,
        "version": rep.version,
        "passed": rep.passed,
        "bound": _json_safe(rep.bound),
        "observed": _json_safe(rep.observed),
        "ratio": _json_safe(rep.ratio),
        "constants": {k: _json_safe(rep.constants[k]) for k in sorted(rep.constants)},
        "error": rep.error,
    }


def emit_report(reports, format: str) -> bytes:
    """Serialize reports; csv always carries a header, plot-data emits
    series sorted by (series, x) so refinement studies read monotonically."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    reports = list(reports)
    if format == "json-lines":
        lines = [json.dumps(_report_dict(r), separators=(", ", ": ")) for r in reports]
        return ("\n".join(lines) + ("\n" if lines else "")).encode()
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS)
        for r in reports:
            d = _report_dict(r)
            writer.writerow(["" if d[c] is None else d[c] for c in _CSV_COLUMNS])
        return buf.getvalue().encode()
    rows = []
    for r in reports:
        x = float(r.constants.get("grid_points", r.seed))
        rows.append((r.kind, x, r.ratio))
    rows.sort(key=lambda row: (row[0], row[1]))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("series", "x", "y"))
    writer.writerows(rows)
    return buf.getvalue().encode()


def parse_report_lines(payload: bytes) -> list:
    """Round-trip helper for json-lines payloads."""
    return [json.loads(line) for line in payload.decode().splitlines() if line]


def render_figure(reports, path: str) -> None:
    """Bar chart of slack ratios per scenario, green for pass and red for
    fail, written as a PNG next to the delimited output."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    reports = list(reports)
    fig, ax = plt.subplots(figsize=(8.0, max(2.0, 0.5 * len(reports) + 1.0)))
    if reports:
        names = [r.name for r in reports]
        ratios = [r.ratio for r in reports]
        colors = ["tab:green" if r.passed else "tab:red" for r in reports]
        ax.barh(range(len(reports)), ratios, color=colors)
        ax.set_yticks(range(len(reports)))
        ax.set_yticklabels(names)
        ax.invert_yaxis()
    ax.set_xlabel("slack ratio (observed / bound)")
    ax.set_title("scenario outcomes")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
