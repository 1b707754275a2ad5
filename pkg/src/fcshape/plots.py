"""Plot data for pairwise scatter comparisons and objective traces.

Figures are emitted as plain delimited text plus a small self-contained SVG,
so no plotting library is required.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

W, H, PAD = 420, 420, 50


def scatter_points(means_a, means_b):
    """Pair per-dataset means of algorithm A (x) and B (y).

    Returns ``(rows, counts)`` where ``rows`` is a list of
    ``(dataset, x, y)`` over datasets present for both algorithms, and
    ``counts`` tallies points above, on and below ``y = x``.
    """
    rows = [(d, means_a[d], means_b[d]) for d in sorted(means_a) if d in means_b]
    counts = {"above": 0, "on": 0, "below": 0}
    for _, x, y in rows:
        if y > x:
            counts["above"] += 1
        elif y < x:
            counts["below"] += 1
        else:
            counts["on"] += 1
    return rows, counts


def _fmt(v):
    return f"{v:.2f}"


def _svg(body, title):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">\n'
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>\n'
        f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>\n'
        f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" '
        f'fill="none" stroke="black"/>\n' + body + "</svg>\n"
    )


def scatter_svg(rows, label_x, label_y, lo=0.0, hi=1.0):
    span = W - 2 * PAD

    def px(v):
        return PAD + (v - lo) / (hi - lo) * span

    def py(v):
        return H - PAD - (v - lo) / (hi - lo) * span

    parts = [
        f'<line x1="{_fmt(px(lo))}" y1="{_fmt(py(lo))}" x2="{_fmt(px(hi))}" '
        f'y2="{_fmt(py(hi))}" stroke="gray" stroke-dasharray="4 3"/>\n'
    ]
    for _, x, y in rows:
        parts.append(
            f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="4" fill="none" stroke="navy"/>\n'
        )
    parts.append(
        f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(label_x)}</text>\n'
    )
    parts.append(
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2})">{escape(label_y)}</text>\n'
    )
    return _svg("".join(parts), f"{label_y} vs {label_x}")


def trace_svg(trace, title="objective"):
    trace = np.asarray(trace, dtype=float)
    span = W - 2 * PAD
    if trace.size == 0:
        return _svg("", title)
    lo, hi = float(trace.min()), float(trace.max())
    if hi == lo:
        hi = lo + 1.0
    n = trace.size
    xs = [PAD + (i / max(n - 1, 1)) * span for i in range(n)]
    ys = [H - PAD - (v - lo) / (hi - lo) * span for v in trace]
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys))
    body = f'<polyline points="{pts}" fill="none" stroke="navy"/>\n'
    body += "".join(
        f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="2.5" fill="navy"/>\n' for x, y in zip(xs, ys)
    )
    body += f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12">iteration</text>\n'
    return _svg(body, title)
