"""CSV traces and SVG convergence plots."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

CSV_HEADER = (
    "t", "x", "y", "x_br", "y_br", "dgap_avg", "nereg_avg", "reg1_avg", "reg2_avg",
    "path", "vt", "eta", "gamma", "stage", "doubled", "weights",
)


def fmt_number(v) -> str:
    """Shortest round-trip decimal; integral floats lose their '.0'."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    s = repr(v)
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _fmt_point(p) -> str:
    try:
        return ";".join(fmt_number(c) for c in p)
    except TypeError:
        return fmt_number(p)


def csv_row(r) -> str:
    fields = (
        str(r.t), _fmt_point(r.x), _fmt_point(r.y), _fmt_point(r.x_br), _fmt_point(r.y_br),
        fmt_number(r.dgap_avg), fmt_number(r.nereg_avg), fmt_number(r.reg1_avg),
        fmt_number(r.reg2_avg), fmt_number(r.path), fmt_number(r.vt),
        fmt_number(r.eta), fmt_number(r.gamma),
        ";".join(str(s) for s in r.stage), fmt_number(r.doubled),
        "" if r.weights is None else ";".join(fmt_number(w) for w in r.weights),
    )
    return ",".join(fields)


def write_csv(trace: Sequence, path) -> Path:
    """Write checkpoint records as UTF-8 CSV with LF line endings."""
    path = Path(path)
    lines = [",".join(CSV_HEADER)]
    lines.extend(csv_row(r) for r in trace)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")
_METRIC_TITLES = {"dgap_avg": "Average D-Gap", "nereg_avg": "Average NE-Reg"}


def render_svg(traces: Sequence, metric: str, path, title: str | None = None,
               width: int = 640, height: int = 400) -> Path:
    """Plot ``metric`` against rounds on a log-x axis, one polyline per trace.

    ``traces`` is a sequence of ``(label, records)`` pairs. Output bytes
    depend only on the inputs.
    """
    if metric not in _METRIC_TITLES:
        raise ValueError(f"metric must be one of {sorted(_METRIC_TITLES)}")
    if not traces:
        raise ValueError("need at least one trace")
    series = []
    for label, records in traces:
        pts = [(r.t, getattr(r, metric)) for r in records if getattr(r, metric) is not None]
        series.append((label, pts))
    ts = [t for _, pts in series for t, _ in pts] or [1]
    vs = [v for _, pts in series for _, v in pts] or [0.0]
    tmin, tmax = min(ts), max(ts)
    lx0 = math.log10(tmin)
    lx1 = math.log10(tmax) if tmax > tmin else lx0 + 1.0
    vmin = min(0.0, min(vs))
    vmax = max(vs)
    if vmax <= vmin:
        vmax = vmin + 1.0

    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(t):
        return ml + (math.log10(t) - lx0) / (lx1 - lx0) * pw

    def sy(v):
        return mt + ph - (v - vmin) / (vmax - vmin) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{_esc(title or _METRIC_TITLES[metric])}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(math.ceil(lx0 - 1e-12), math.floor(lx1 + 1e-12) + 1):
        X = sx(10.0 ** k)
        out.append(f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{mt + ph + 20}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">1e{k}</text>')
    for i in range(5):
        v = vmin + (vmax - vmin) * i / 4
        Y = sy(v)
        out.append(f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{v:.3g}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">rounds</text>')
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
        ly = mt + 14 + 16 * i
        out.append(f'<line x1="{ml + pw - 150}" y1="{ly - 4}" x2="{ml + pw - 130}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw - 125}" y="{ly}" font-family="sans-serif" font-size="11">'
                   f'{_esc(label)}</text>')
    out.append("</svg>")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    return path


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
