"""Minimal hand-written SVG line plots with fixed-precision coordinates."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PANEL_W = 360
PANEL_H = 240
MARGIN = 48


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _panel(x, y, title, ox, oy) -> list[str]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = 0.0, float(y.max()) if y.size and y.max() > 0 else 1.0
    w = PANEL_W - 2 * MARGIN
    h = PANEL_H - 2 * MARGIN
    sx = w / (x1 - x0) if x1 > x0 else 1.0
    sy = h / (y1 - y0)
    px = ox + MARGIN + (x - x0) * sx
    py = oy + PANEL_H - MARGIN - (y - y0) * sy
    pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))
    left, right = ox + MARGIN, ox + PANEL_W - MARGIN
    top, bottom = oy + MARGIN, oy + PANEL_H - MARGIN
    return [
        f'<g>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
        f'<text x="{_fmt((left + right) / 2)}" y="{oy + MARGIN - 12}" text-anchor="middle" font-size="12">{escape(title)}</text>',
        f'<text x="{left}" y="{bottom + 16}" font-size="10">{_fmt(x0)}</text>',
        f'<text x="{right}" y="{bottom + 16}" text-anchor="end" font-size="10">{_fmt(x1)}</text>',
        f'<text x="{left - 4}" y="{top + 4}" text-anchor="end" font-size="10">{_fmt(y1)}</text>',
        f'<text x="{left - 4}" y="{bottom}" text-anchor="end" font-size="10">0</text>',
        f'<text x="{_fmt((left + right) / 2)}" y="{bottom + 30}" text-anchor="middle" font-size="11">y</text>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.2" points="{pts}"/>',
        '</g>',
    ]


def line_plot_svg(panels: list[tuple[np.ndarray, np.ndarray, str]], columns: int = 2) -> str:
    """SVG text for a grid of |f| versus y panels given as (x, y, title)."""
    if not panels:
        raise ValueError("at least one panel is required")
    columns = max(1, min(columns, len(panels)))
    rows = -(-len(panels) // columns)
    width, height = columns * PANEL_W, rows * PANEL_H
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, (x, y, title) in enumerate(panels):
        out.extend(_panel(x, y, title, (i % columns) * PANEL_W, (i // columns) * PANEL_H))
    out.append("</svg>")
    return "\n".join(out) + "\n"
