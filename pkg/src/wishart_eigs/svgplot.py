"""Minimal static SVG overlay: histogram bars plus a theory polyline.

Written by hand so the output depends only on the inputs (no timestamps,
no backend-specific ids) and reruns are byte-identical.
"""

import numpy as np

WIDTH = 640
HEIGHT = 400
MARGIN = 50


def _num(v) -> str:
    return f"{float(v):.3f}"


def overlay_svg(hist, xs, ys, xlabel="x", curve_label="theory") -> str:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    x_lo = min(float(hist.edges[0]), float(xs.min()))
    x_hi = max(float(hist.edges[-1]), float(xs.max()))
    y_hi = max(float(hist.densities.max()), float(ys.max()), 1e-300) * 1.05
    pw = WIDTH - 2 * MARGIN
    ph = HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y):
        return HEIGHT - MARGIN - y / y_hi * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for left, right, dens in zip(hist.edges[:-1], hist.edges[1:], hist.densities):
        x0, x1 = px(left), px(right)
        top = py(dens)
        parts.append(
            f'<rect x="{_num(x0)}" y="{_num(top)}" width="{_num(x1 - x0)}" '
            f'height="{_num(HEIGHT - MARGIN - top)}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>'
        )
    points = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{points}" fill="none" stroke="#d62728" stroke-width="2"/>')
    base = HEIGHT - MARGIN
    parts.append(f'<line x1="{MARGIN}" y1="{base}" x2="{WIDTH - MARGIN}" y2="{base}" stroke="black"/>')
    parts.append(f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{base}" stroke="black"/>')
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        parts.append(
            f'<text x="{_num(px(xv))}" y="{base + 18}" font-size="12" text-anchor="middle">{xv:.3g}</text>'
        )
        yv = frac * y_hi
        parts.append(
            f'<text x="{MARGIN - 6}" y="{_num(py(yv) + 4)}" font-size="12" text-anchor="end">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 10}" font-size="14" text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="{WIDTH - MARGIN}" y="{MARGIN - 10}" font-size="14" text-anchor="end" '
        f'fill="#d62728">{curve_label}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
