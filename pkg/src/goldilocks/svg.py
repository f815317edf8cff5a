"""Minimal SVG writers: a rect-grid heatmap and polyline curves."""

import math

import numpy as np

_NEG = (59, 76, 192)
_MID = (255, 255, 255)
_POS = (180, 4, 38)


def diverging_color(value, vmin=-1.0, vmax=1.0):
    """Blue-white-red color, linear in ``value`` over [vmin, vmax]."""
    x = (min(max(value, vmin), vmax) - vmin) / (vmax - vmin) * 2.0 - 1.0
    lo, hi = (_MID, _POS) if x >= 0.0 else (_MID, _NEG)
    f = abs(x)
    r, g, b = (round(lo[i] + f * (hi[i] - lo[i])) for i in range(3))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(values, x, y, xlabel, ylabel, title="", cell=6, vmin=-1.0, vmax=1.0):
    """SVG heatmap with ``values[i, j]`` at row ``y[i]`` and column ``x[j]``.

    Row 0 is drawn at the bottom.
    """
    values = np.asarray(values)
    ny, nx = values.shape
    left, top, bottom = 60, 30, 45
    width, height = left + nx * cell + 20, top + ny * cell + bottom
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{left}" y="18" font-size="12">{title}</text>']
    for i in range(ny):
        yy = top + (ny - 1 - i) * cell
        for j in range(nx):
            color = diverging_color(float(values[i, j]), vmin, vmax)
            out.append(f'<rect x="{left + j * cell}" y="{yy}" width="{cell}" height="{cell}" fill="{color}"/>')
    base = top + ny * cell
    out.append(f'<text x="{left}" y="{base + 15}" font-size="10">{x[0]:.3g}</text>')
    out.append(f'<text x="{left + nx * cell - 20}" y="{base + 15}" font-size="10">{x[-1]:.3g}</text>')
    out.append(f'<text x="{left + nx * cell // 2 - 20}" y="{base + 32}" font-size="11">{xlabel}</text>')
    out.append(f'<text x="5" y="{base}" font-size="10">{y[0]:.3g}</text>')
    out.append(f'<text x="5" y="{top + 10}" font-size="10">{y[-1]:.3g}</text>')
    out.append(f'<text x="5" y="{top + ny * cell // 2}" font-size="11">{ylabel}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def curves(x, series, xlabel, title="", logx=False, width=640, height=360):
    """SVG line plot; ``series`` maps a label to a y array aligned with ``x``."""
    x = np.asarray(x, dtype=float)
    xs = np.log10(x) if logx else x
    keep = np.isfinite(xs)
    ys = [np.asarray(v, dtype=float)[keep] for v in series.values()]
    xs = xs[keep]
    ymin = min(float(np.min(v)) for v in ys)
    ymax = max(float(np.max(v)) for v in ys)
    if ymax == ymin:
        ymax = ymin + 1.0
    xmin, xmax = float(xs.min()), float(xs.max())
    if xmax == xmin:
        xmax = xmin + 1.0
    left, right, top, bottom = 60, 20, 30, 45
    pw, ph = width - left - right, height - top - bottom

    def px(v):
        return left + (v - xmin) / (xmax - xmin) * pw

    def py(v):
        return top + (ymax - v) / (ymax - ymin) * ph

    palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<text x="{left}" y="18" font-size="12">{title}</text>',
           f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#888"/>']
    if ymin < 0.0 < ymax:
        out.append(f'<line x1="{left}" y1="{py(0.0):.2f}" x2="{left + pw}" y2="{py(0.0):.2f}" stroke="#ccc"/>')
    for k, (label, yv) in enumerate(zip(series, ys)):
        color = palette[k % len(palette)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(xs, yv) if math.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(f'<text x="{left + pw - 150}" y="{top + 15 + 14 * k}" font-size="11" fill="{color}">{label}</text>')
    xl = "log10 " + xlabel if logx else xlabel
    out.append(f'<text x="{left}" y="{height - 25}" font-size="10">{xmin:.3g}</text>')
    out.append(f'<text x="{left + pw - 20}" y="{height - 25}" font-size="10">{xmax:.3g}</text>')
    out.append(f'<text x="{left + pw // 2 - 30}" y="{height - 8}" font-size="11">{xl}</text>')
    out.append(f'<text x="5" y="{top + 10}" font-size="10">{ymax:.3g}</text>')
    out.append(f'<text x="5" y="{top + ph}" font-size="10">{ymin:.3g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
