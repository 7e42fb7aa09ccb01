"""Deterministic standalone SVG emission for log-log error plots.

No plotting library: the file is assembled from f-strings so that identical
inputs produce identical bytes, and the underlying data table rides along in
an XML comment.
"""

from __future__ import annotations

import math
from typing import Sequence

__all__ = ["NoData", "render_loglog_plot"]

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70, 30, 40, 60
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_FLOOR = 1e-300


class NoData(ValueError):
    """Nothing to plot."""


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_loglog_plot(curves: Sequence[dict], title: str) -> str:
    """Render curves [{label, n_values, errors, kappa}] as an SVG string.

    Points with error <= 0 are dropped (they have no log); a curve whose
    points all vanish is skipped.  The slope annotation repeats the fitted
    decay exponent attached to each curve.
    """
    plotted = []
    for cur in curves:
        pts = [(n, e) for n, e in zip(cur["n_values"], cur["errors"]) if e > _FLOOR]
        if pts:
            plotted.append({**cur, "pts": pts})
    if not plotted:
        raise NoData("no positive errors to plot")

    xs = [math.log10(n) for c in plotted for n, _ in c["pts"]]
    ys = [math.log10(e) for c in plotted for _, e in c["pts"]]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = _W - _ML - _MR
    ph = _H - _MT - _MB

    def px(x: float) -> float:
        return _ML + (x - x0) / (x1 - x0) * pw

    def py(y: float) -> float:
        return _MT + (y1 - y) / (y1 - y0) * ph

    out = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">'
    )
    table = ["label\tn\terror"]
    for cur in plotted:
        for n, e in cur["pts"]:
            table.append(f"{cur['label']}\t{n}\t{e!r}")
    out.append("<!-- data\n" + "\n".join(table) + "\n-->")
    out.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<text x="{_W // 2}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="15">{title}</text>'
    )

    # frame and decade ticks
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>'
    )
    for k in range(math.ceil(x0), math.floor(x1) + 1):
        out.append(
            f'<line x1="{_fmt(px(k))}" y1="{_MT + ph}" x2="{_fmt(px(k))}" '
            f'y2="{_MT + ph + 6}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_fmt(px(k))}" y="{_MT + ph + 22}" text-anchor="middle" '
            f'font-family="monospace" font-size="12">1e{k}</text>'
        )
    for k in range(math.ceil(y0), math.floor(y1) + 1):
        out.append(
            f'<line x1="{_ML - 6}" y1="{_fmt(py(k))}" x2="{_ML}" '
            f'y2="{_fmt(py(k))}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_ML - 10}" y="{_fmt(py(k) + 4)}" text-anchor="end" '
            f'font-family="monospace" font-size="12">1e{k}</text>'
        )
    out.append(
        f'<text x="{_W // 2}" y="{_H - 14}" text-anchor="middle" '
        'font-family="monospace" font-size="13">n</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + ph // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="13" '
        f'transform="rotate(-90 18 {_MT + ph // 2})">|empirical - haar|</text>'
    )

    for i, cur in enumerate(plotted):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{_fmt(px(math.log10(n)))},{_fmt(py(math.log10(e)))}" for n, e in cur["pts"]
        )
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for n, e in cur["pts"]:
            out.append(
                f'<circle cx="{_fmt(px(math.log10(n)))}" cy="{_fmt(py(math.log10(e)))}" '
                f'r="3" fill="{color}"/>'
            )
        kappa = cur.get("kappa")
        slope = "slope n/a" if kappa is None else f"slope -{kappa:.4f}"
        out.append(
            f'<text x="{_ML + pw - 8}" y="{_MT + 18 + 16 * i}" text-anchor="end" '
            f'font-family="monospace" font-size="12" fill="{color}">'
            f"{cur['label']} ({slope})</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
