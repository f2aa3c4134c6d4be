"""Tiny deterministic SVG line plots (polylines, axes, ticks, legend)."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f4e9c", "#c0392b", "#d4a017", "#2e8b57", "#222222", "#7f7f7f", "#8e44ad")
W, H = 480, 360
ML, MR, MT, MB = 60, 20, 30, 45


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-12 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


def line_plot(series, title="", xlabel="", ylabel="", xlim=None, ylim=None) -> str:
    """series: iterable of dicts {x, y, label, dashed}; returns SVG text."""
    series = [s for s in series if len(s["x"])]
    xs = np.concatenate([np.asarray(s["x"], float) for s in series])
    ys = np.concatenate([np.asarray(s["y"], float) for s in series])
    finite = np.isfinite(xs) & np.isfinite(ys)
    x0, x1 = xlim or (float(xs[finite].min()), float(xs[finite].max()))
    y0, y1 = ylim or (float(ys[finite].min()), float(ys[finite].max()))
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    pw, ph = W - ML - MR, H - MT - MB

    def sx(v):
        return ML + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return MT + (1 - (v - y0) / (y1 - y0)) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        X = _fmt(sx(t))
        out.append(f'<line x1="{X}" y1="{MT + ph}" x2="{X}" y2="{MT + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{X}" y="{MT + ph + 18}" font-size="11" text-anchor="middle">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        Y = _fmt(sy(t))
        out.append(f'<line x1="{ML - 5}" y1="{Y}" x2="{ML}" y2="{Y}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{Y}" font-size="11" text-anchor="end" dominant-baseline="middle">{_fmt(t)}</text>')
    out.append(f'<clipPath id="c"><rect x="{ML}" y="{MT}" width="{pw}" height="{ph}"/></clipPath>')
    for i, s in enumerate(series):
        x = np.asarray(s["x"], float)
        y = np.asarray(s["y"], float)
        ok = np.isfinite(x) & np.isfinite(y)
        pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(x[ok], y[ok]))
        color = s.get("color") or PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="4 3"' if s.get("dashed") else ""
        out.append(f'<polyline clip-path="url(#c)" fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"/>')
        if s.get("label"):
            ly = MT + 14 + 14 * i
            out.append(f'<line x1="{ML + 10}" y1="{ly}" x2="{ML + 30}" y2="{ly}" stroke="{color}"{dash}/>')
            out.append(f'<text x="{ML + 35}" y="{ly + 4}" font-size="11">{escape(s["label"])}</text>')
    if title:
        out.append(f'<text x="{W / 2}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>')
    if xlabel:
        out.append(f'<text x="{ML + pw / 2}" y="{H - 8}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="14" y="{MT + ph / 2}" font-size="12" text-anchor="middle" '
                   f'transform="rotate(-90 14 {MT + ph / 2})">{escape(ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
