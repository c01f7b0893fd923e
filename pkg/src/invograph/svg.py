"""Bare-bones SVG renderers for the CSV outputs (scatter, step, bars).

No styling options beyond labels; the CSVs are the primary product.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

W, H, PAD = 480, 360, 48


def _frame(xlim, ylim, xlabel: str, ylabel: str, title: str):
    (x0, x1), (y0, y1) = xlim, ylim
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return PAD + (x - x0) / (x1 - x0) * (W - 2 * PAD)

    def py(y):
        return H - PAD - (y - y0) / (y1 - y0) * (H - 2 * PAD)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
        f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
        f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
        f'<text x="{PAD}" y="{H - PAD + 14}" font-size="10">{x0:.3g}</text>',
        f'<text x="{W - PAD}" y="{H - PAD + 14}" text-anchor="end" font-size="10">{x1:.3g}</text>',
        f'<text x="{PAD - 4}" y="{H - PAD}" text-anchor="end" font-size="10">{y0:.3g}</text>',
        f'<text x="{PAD - 4}" y="{PAD + 4}" text-anchor="end" font-size="10">{y1:.3g}</text>',
    ]
    return parts, px, py


def _lim(values: Sequence[float]) -> tuple[float, float]:
    vals = list(values)
    return (min(vals), max(vals)) if vals else (0.0, 1.0)


def scatter(xs, ys, *, line: tuple[float, float] | None = None, xlabel="", ylabel="", title="",
            xlim=None, ylim=None) -> str:
    """Points, plus an optional ``(slope, intercept)`` line across the x range."""
    xlim = xlim or _lim(xs)
    ylim = ylim or _lim(ys)
    parts, px, py = _frame(xlim, ylim, xlabel, ylabel, title)
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" fill="steelblue"/>')
    if line is not None:
        a, b = line
        xa, xb = xlim
        parts.append(
            f'<line x1="{px(xa):.2f}" y1="{py(a * xa + b):.2f}" x2="{px(xb):.2f}" '
            f'y2="{py(a * xb + b):.2f}" stroke="firebrick"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def steps(series: dict[str, list[tuple[float, float, float]]], *, xlabel="", ylabel="", title="") -> str:
    """Piecewise-constant curves given as ``name -> [(x_lo, x_hi, value), ...]``."""
    colors = ["steelblue", "firebrick", "seagreen", "darkorange"]
    allv = [v for segs in series.values() for _, _, v in segs]
    parts, px, py = _frame((0.0, 1.0), (0.0, max(allv, default=1.0) or 1.0), xlabel, ylabel, title)
    for i, (name, segs) in enumerate(series.items()):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(lo):.2f},{py(v):.2f} {px(hi):.2f},{py(v):.2f}" for lo, hi, v in segs)
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}"/>')
        parts.append(f'<text x="{W - PAD}" y="{PAD + 14 * i}" text-anchor="end" font-size="11" '
                     f'fill="{color}">{escape(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bars(edges: Sequence[float], mass: Sequence[float], *, xlabel="", ylabel="", title="") -> str:
    parts, px, py = _frame((edges[0], edges[-1]), (0.0, max(mass, default=1.0) or 1.0), xlabel, ylabel, title)
    for lo, hi, m in zip(edges[:-1], edges[1:], mass):
        parts.append(
            f'<rect x="{px(lo):.2f}" y="{py(m):.2f}" width="{px(hi) - px(lo):.2f}" '
            f'height="{py(0) - py(m):.2f}" fill="steelblue" stroke="white"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
