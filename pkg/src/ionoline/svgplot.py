"""Tiny self-contained SVG line plots for the command-line reports.

One polyline per series, optional log scaling per axis, decade or
nice-number ticks. No plotting framework: output is a deterministic
string, so rerunning a command rewrites identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import numpy as np

WIDTH, HEIGHT = 760, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 75, 170, 45, 55

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    return [10.0 ** e for e in range(math.ceil(lo - 1e-9), math.floor(hi + 1e-9) + 1)]


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def line_plot(series: Sequence[tuple[str, np.ndarray, np.ndarray]],
              title: str, xlabel: str, ylabel: str,
              log_x: bool = False, log_y: bool = False) -> str:
    """Render series of (label, x, y) to an SVG document string."""
    def tx(v):
        return np.log10(v) if log_x else np.asarray(v, dtype=float)

    def ty(v):
        return np.log10(v) if log_y else np.asarray(v, dtype=float)

    xs = [tx(np.asarray(x, dtype=float)) for _, x, _ in series]
    ys = [ty(np.asarray(y, dtype=float)) for _, _, y in series]
    x_lo = min(float(np.min(x)) for x in xs)
    x_hi = max(float(np.max(x)) for x in xs)
    y_lo = min(float(np.min(y)) for y in ys)
    y_hi = max(float(np.max(y)) for y in ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(v):
        return MARGIN_L + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return MARGIN_T + ph - (v - y_lo) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L}" y="22" font-size="15">{title}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        f'fill="none" stroke="black"/>',
    ]

    x_ticks = _decade_ticks(x_lo, x_hi) if log_x else _nice_ticks(x_lo, x_hi)
    for v in x_ticks:
        c = px(math.log10(v)) if log_x else px(v)
        parts.append(f'<line x1="{c:.2f}" y1="{MARGIN_T + ph}" x2="{c:.2f}" '
                     f'y2="{MARGIN_T + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{c:.2f}" y="{MARGIN_T + ph + 18}" '
                     f'text-anchor="middle">{_fmt(v)}</text>')
    y_ticks = _decade_ticks(y_lo, y_hi) if log_y else _nice_ticks(y_lo, y_hi)
    for v in y_ticks:
        c = py(math.log10(v)) if log_y else py(v)
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{c:.2f}" x2="{MARGIN_L}" '
                     f'y2="{c:.2f}" stroke="black"/>')
        parts.append(f'<text x="{MARGIN_L - 8}" y="{c + 4:.2f}" '
                     f'text-anchor="end">{_fmt(v)}</text>')

    parts.append(f'<text x="{MARGIN_L + pw / 2}" y="{HEIGHT - 12}" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="18" y="{MARGIN_T + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 18 {MARGIN_T + ph / 2})">{ylabel}</text>')

    for i, ((label, x, _), xt, yt) in enumerate(zip(series, xs, ys)):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xt, yt))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        ly = MARGIN_T + 14 + 16 * i
        lx = MARGIN_L + pw + 12
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 24}" y="{ly}">{label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_plot(path: str | Path, *args, **kwargs) -> None:
    Path(path).write_text(line_plot(*args, **kwargs))
