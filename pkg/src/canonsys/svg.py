"""Plain SVG 1.1 step plots (no plotting dependency)."""

from __future__ import annotations

import math
from html import escape

WIDTH, HEIGHT = 800, 500
MARGIN = dict(left=70, right=20, top=40, bottom=50)
COLORS = ("#000000", "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e")


def _nice_ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-12 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def step_plot(series, *, title="", xlabel="t", ylabel="", curves=()) -> str:
    """Render step functions as SVG.

    ``series`` is a list of ``(label, edges, values)`` with
    ``len(edges) == len(values) + 1``; ``curves`` is a list of
    ``(label, xs, ys)`` polylines drawn on top.
    """
    xs = [e for _, edges, _ in series for e in edges] + [x for _, cx, _ in curves for x in cx]
    ys = [v for _, _, values in series for v in values] + [y for _, _, cy in curves for y in cy]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    y1 = y1 + 0.05 * (y1 - y0 or 1.0)
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / ((x1 - x0) or 1.0) * pw

    def py(y):
        return MARGIN["top"] + (1.0 - (y - y0) / ((y1 - y0) or 1.0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
    ]
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}" stroke="black"/>')
    out.append(f'<line x1="{bx}" y1="{MARGIN["top"]}" x2="{bx}" y2="{by}" stroke="black"/>')
    for t in _nice_ticks(x0, x1):
        out.append(f'<line x1="{px(t):.2f}" y1="{by}" x2="{px(t):.2f}" y2="{by + 5}" stroke="black"/>')
        out.append(f'<text x="{px(t):.2f}" y="{by + 18}" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">{t:g}</text>')
    for t in _nice_ticks(y0, y1):
        out.append(f'<line x1="{bx - 5}" y1="{py(t):.2f}" x2="{bx}" y2="{py(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{bx - 8}" y="{py(t) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{t:g}</text>')
    out.append(f'<text x="{bx + pw / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="13">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="13" transform="rotate(-90 16 {MARGIN["top"] + ph / 2:.1f})">{escape(ylabel)}</text>')

    legend_y = MARGIN["top"] + 12
    for i, (label, edges, values) in enumerate(series):
        color = COLORS[i % len(COLORS)]
        d = [f"M {px(edges[0]):.2f} {py(values[0]):.2f}"]
        for k, v in enumerate(values):
            d.append(f"L {px(edges[k]):.2f} {py(v):.2f} L {px(edges[k + 1]):.2f} {py(v):.2f}")
        out.append(f'<path d="{" ".join(d)}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{bx + pw - 10}" y="{legend_y:.1f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="12" fill="{color}">{escape(label)}</text>')
        legend_y += 16
    for j, (label, cx, cy) in enumerate(curves):
        color = COLORS[(len(series) + j) % len(COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(cx, cy))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{bx + pw - 10}" y="{legend_y:.1f}" text-anchor="end" font-family="sans-serif" '
                   f'font-size="12" fill="{color}">{escape(label)}</text>')
        legend_y += 16
    out.append("</svg>")
    return "\n".join(out) + "\n"
