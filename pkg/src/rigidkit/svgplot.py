"""Minimal deterministic SVG line charts (no external assets)."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 400
MARGIN = dict(left=64, right=150, top=32, bottom=48)
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]


def _num(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * t / (count - 1) for t in range(count)]


def _span(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def line_chart(rows: Sequence[dict], x: str, ys: Sequence[str], title: str = "") -> str:
    """One polyline per column in ``ys`` against column ``x``."""
    if not rows:
        raise ValueError("no data rows to plot")
    for col in [x, *ys]:
        if col not in rows[0]:
            raise ValueError(f"missing column {col!r}")
    xs = [float(r[x]) for r in rows]
    series = {c: [float(r[c]) for r in rows] for c in ys}
    x0, x1 = _span(xs)
    y0, y1 = _span([v for s in series.values() for v in s])
    left, top = MARGIN["left"], MARGIN["top"]
    w = WIDTH - MARGIN["left"] - MARGIN["right"]
    h = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return left + (v - x0) / (x1 - x0) * w

    def py(v):
        return top + h - (v - y0) / (y1 - y0) * h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="#444"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_num(px(t))}" y1="{top + h}" x2="{_num(px(t))}" y2="{top + h + 4}" stroke="#444"/>')
        out.append(f'<text x="{_num(px(t))}" y="{top + h + 16}" text-anchor="middle">{t:.4g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 4}" y1="{_num(py(t))}" x2="{left}" y2="{_num(py(t))}" stroke="#444"/>')
        out.append(f'<text x="{left - 6}" y="{_num(py(t) + 4)}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{left + w / 2:.0f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(x)}</text>')
    for s, (name, vals) in enumerate(series.items()):
        color = PALETTE[s % len(PALETTE)]
        pts = " ".join(f"{_num(px(a))},{_num(py(b))}" for a, b in zip(xs, vals))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        for a, b in zip(xs, vals):
            out.append(f'<circle cx="{_num(px(a))}" cy="{_num(py(b))}" r="2.5" fill="{color}"/>')
        ly = top + 12 + 18 * s
        lx = left + w + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 18}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 24}" y="{ly + 4}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
