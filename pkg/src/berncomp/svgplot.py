"""Minimal static SVG plots (scatter plus optional lines, linear or log-log
axes).  Plots are batch artifacts, so no plotting dependency is pulled in.
"""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 20, 40, 55  # margins


def _transform(values, log):
    return [math.log10(v) for v in values] if log else list(values)


def _ticks(lo, hi, count=5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _fmt(value, log):
    v = 10.0 ** value if log else value
    return f"{v:.3g}"


def write_plot(path, dot_series, line_series=(), *, title="", xlabel="",
               ylabel="", loglog=False):
    """Write an SVG scatter plot.

    dot_series and line_series are sequences of (label, xs, ys).  With
    loglog=True all coordinates must be positive.
    """
    xs_all, ys_all = [], []
    for _, xs, ys in list(dot_series) + list(line_series):
        xs_all.extend(_transform(xs, loglog))
        ys_all.extend(_transform(ys, loglog))
    if not xs_all:
        xs_all, ys_all = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    x_pad = 0.05 * (x_hi - x_lo or 1.0)
    y_pad = 0.05 * (y_hi - y_lo or 1.0)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2}" y="22" text-anchor="middle" font-size="14">{title}</text>',
    ]
    # axes
    parts.append(f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>')
    parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>')
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(f'<line x1="{x:.1f}" y1="{_H - _MB}" x2="{x:.1f}" y2="{_H - _MB + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{_H - _MB + 18}" text-anchor="middle">{_fmt(t, loglog)}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(f'<line x1="{_ML - 5}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(t, loglog)}</text>')
    parts.append(f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 12}" text-anchor="middle">{xlabel}</text>')
    parts.append(
        f'<text x="16" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MT + _H - _MB) / 2})">{ylabel}</text>'
    )

    legend_y = _MT + 4
    color_idx = 0
    for label, xs, ys in line_series:
        color = _PALETTE[color_idx % len(_PALETTE)]
        color_idx += 1
        pts = " ".join(
            f"{px(x):.1f},{py(y):.1f}"
            for x, y in zip(_transform(xs, loglog), _transform(ys, loglog))
        )
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        if label:
            parts.append(f'<line x1="{_W - 170}" y1="{legend_y}" x2="{_W - 150}" y2="{legend_y}" stroke="{color}" stroke-width="1.5"/>')
            parts.append(f'<text x="{_W - 144}" y="{legend_y + 4}">{label}</text>')
            legend_y += 16
    for label, xs, ys in dot_series:
        color = _PALETTE[color_idx % len(_PALETTE)]
        color_idx += 1
        for x, y in zip(_transform(xs, loglog), _transform(ys, loglog)):
            parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="{color}"/>')
        if label:
            parts.append(f'<circle cx="{_W - 160}" cy="{legend_y}" r="3" fill="{color}"/>')
            parts.append(f'<text x="{_W - 144}" y="{legend_y + 4}">{label}</text>')
            legend_y += 16
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")
