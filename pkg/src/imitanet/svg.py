"""Minimal SVG line plots and heatmaps, written as plain text."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]

W, H = 640, 400
ML, MR, MT, MB = 60, 20, 30, 45


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _frame(title: str, xlabel: str, ylabel: str, x0, x1, y0, y1) -> list[str]:
    pw, ph = W - ML - MR, H - MT - MB
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{W / 2}" y="{H - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
        f'<text x="{ML}" y="{H - MB + 14}" font-size="10">{_fmt(x0)}</text>',
        f'<text x="{W - MR}" y="{H - MB + 14}" text-anchor="end" font-size="10">{_fmt(x1)}</text>',
        f'<text x="{ML - 4}" y="{H - MB}" text-anchor="end" font-size="10">{_fmt(y0)}</text>',
        f'<text x="{ML - 4}" y="{MT + 10}" text-anchor="end" font-size="10">{_fmt(y1)}</text>',
    ]


def _thin(n: int, cap: int) -> np.ndarray:
    if n <= cap:
        return np.arange(n)
    return np.unique(np.linspace(0, n - 1, cap).round().astype(int))


def line_plot(series, title="", xlabel="t", ylabel="", max_points=1000) -> str:
    """``series`` is a list of ``(xs, ys, colour_index)`` tuples."""
    xs_all = np.concatenate([np.asarray(s[0], float) for s in series]) if series else np.zeros(1)
    ys_all = np.concatenate([np.asarray(s[1], float) for s in series]) if series else np.zeros(1)
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw, ph = W - ML - MR, H - MT - MB
    out = _frame(title, xlabel, ylabel, x0, x1, y0, y1)
    for xs, ys, c in series:
        xs, ys = np.asarray(xs, float), np.asarray(ys, float)
        idx = _thin(len(xs), max_points)
        pts = " ".join(
            f"{ML + (xs[k] - x0) / (x1 - x0) * pw:.2f},{MT + (y1 - ys[k]) / (y1 - y0) * ph:.2f}" for k in idx
        )
        colour = PALETTE[c % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1" stroke-opacity="0.7" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap(matrix, title="", xlabel="player", ylabel="t (downward)", max_rows=400) -> str:
    """Rows run top to bottom; values in [0, 1] map white to dark blue."""
    m = np.asarray(matrix, float)
    rows = _thin(m.shape[0], max_rows)
    m = m[rows]
    lo, hi = float(m.min()), float(m.max())
    scale = (m - lo) / (hi - lo) if hi > lo else np.zeros_like(m)
    pw, ph = W - ML - MR, H - MT - MB
    cw, ch = pw / m.shape[1], ph / m.shape[0]
    out = _frame(title, xlabel, ylabel, 1, m.shape[1], int(rows[-1]), 0)
    for r in range(m.shape[0]):
        for c in range(m.shape[1]):
            v = scale[r, c]
            if v <= 0:
                continue
            shade = int(round(255 * (1 - v)))
            out.append(
                f'<rect x="{ML + c * cw:.2f}" y="{MT + r * ch:.2f}" width="{cw + 0.05:.2f}" '
                f'height="{ch + 0.05:.2f}" fill="rgb({shade},{shade},255)"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
