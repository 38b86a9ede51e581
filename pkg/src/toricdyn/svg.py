"""Minimal SVG line plot (axes plus one polyline)."""
from __future__ import annotations

from typing import Sequence

WIDTH, HEIGHT, PAD = 480, 320, 48


def line_plot(xs: Sequence[float], ys: Sequence[float], title: str = "",
              xlabel: str = "", ylabel: str = "") -> str:
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(x):
        return PAD + (x - x0) / (x1 - x0) * (WIDTH - 2 * PAD)

    def py(y):
        return HEIGHT - PAD - (y - y0) / (y1 - y0) * (HEIGHT - 2 * PAD)

    points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    bottom, left = HEIGHT - PAD, PAD
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{WIDTH - PAD}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{PAD}" x2="{left}" y2="{bottom}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{PAD / 2}" text-anchor="middle" font-size="14">{title}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{ylabel}</text>',
        f'<text x="{left}" y="{bottom + 16}" font-size="10" text-anchor="middle">{x0:g}</text>',
        f'<text x="{WIDTH - PAD}" y="{bottom + 16}" font-size="10" text-anchor="middle">{x1:g}</text>',
        f'<text x="{left - 4}" y="{bottom}" font-size="10" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{left - 4}" y="{PAD + 4}" font-size="10" text-anchor="end">{y1:.3g}</text>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{points}"/>',
    ]
    parts += [f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="steelblue"/>' for x, y in zip(xs, ys)]
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
