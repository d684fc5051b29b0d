"""Minimal deterministic SVG line charts.

String building only: fixed palette, fixed geometry, every coordinate
formatted with an explicit precision, no timestamps and no randomness, so
the same data always yields the same bytes.
"""

from __future__ import annotations

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 840, 480
_ML, _MR, _MT, _MB = 90, 30, 48, 58


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:.4g}"


def _linear_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _decade_ticks(lo: float, hi: float, limit: int = 9) -> list[float]:
    first = math.ceil(lo - 1e-9)
    last = math.floor(hi + 1e-9)
    if last < first:
        return [lo, hi]
    stride = max(1, math.ceil((last - first + 1) / limit))
    return [float(d) for d in range(first, last + 1, stride)]


def svg_line_chart(
    title: str,
    x_label: str,
    y_label: str,
    x_values,
    series,
    log_x: bool = False,
    log_y: bool = False,
) -> str:
    """Render labeled polyline series to an SVG string.

    ``series`` is a list of (label, values) pairs aligned with
    ``x_values``; None values (and nonpositive ones on a log axis) are
    dropped point by point.  Axis ticks are decade-based on log axes and
    evenly spaced otherwise.
    """
    points_by_series: list[tuple[str, list[tuple[float, float]]]] = []
    for label, values in series:
        pts = []
        for x, y in zip(x_values, values):
            if y is None:
                continue
            if log_x and x <= 0.0:
                continue
            if log_y and y <= 0.0:
                continue
            u = math.log10(x) if log_x else float(x)
            v = math.log10(y) if log_y else float(y)
            pts.append((u, v))
        points_by_series.append((str(label), pts))

    all_pts = [p for _, pts in points_by_series for p in pts]
    if not all_pts:
        raise ValueError("no plottable points")
    us = [u for u, _ in all_pts]
    vs = [v for _, v in all_pts]
    u_lo, u_hi = min(us), max(us)
    v_lo, v_hi = min(vs), max(vs)
    if u_hi - u_lo <= 0.0:
        u_lo, u_hi = u_lo - 0.5, u_hi + 0.5
    pad = 0.05 * (v_hi - v_lo)
    if pad <= 0.0:
        pad = max(abs(v_hi), 1.0) * 0.05
    v_lo, v_hi = v_lo - pad, v_hi + pad

    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def sx(u: float) -> float:
        return _ML + plot_w * (u - u_lo) / (u_hi - u_lo)

    def sy(v: float) -> float:
        return _MT + plot_h * (v_hi - v) / (v_hi - v_lo)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">'
    )
    out.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<text x="{_W // 2}" y="26" font-family="sans-serif" font-size="16" '
        f'text-anchor="middle">{title}</text>'
    )
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )

    x_ticks = _decade_ticks(u_lo, u_hi) if log_x else _linear_ticks(u_lo, u_hi)
    for t in x_ticks:
        px = sx(t)
        if not (_ML - 0.5 <= px <= _W - _MR + 0.5):
            continue
        label = f"1e{int(t)}" if log_x else _tick_label(t)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_MT + plot_h}" x2="{_fmt(px)}" '
            f'y2="{_MT + plot_h + 5}" stroke="#333333" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{_MT + plot_h + 20}" '
            f'font-family="sans-serif" font-size="11" '
            f'text-anchor="middle">{label}</text>'
        )
    y_ticks = _decade_ticks(v_lo, v_hi) if log_y else _linear_ticks(v_lo, v_hi)
    for t in y_ticks:
        py = sy(t)
        if not (_MT - 0.5 <= py <= _MT + plot_h + 0.5):
            continue
        label = f"1e{int(t)}" if log_y else _tick_label(t)
        out.append(
            f'<line x1="{_ML - 5}" y1="{_fmt(py)}" x2="{_ML}" y2="{_fmt(py)}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_ML - 9}" y="{_fmt(py + 4)}" font-family="sans-serif" '
            f'font-size="11" text-anchor="end">{label}</text>'
        )
    out.append(
        f'<text x="{_ML + plot_w // 2}" y="{_H - 14}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle">{x_label}</text>'
    )
    out.append(
        f'<text x="20" y="{_MT + plot_h // 2}" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 20 {_MT + plot_h // 2})">{y_label}</text>'
    )

    for i, (label, pts) in enumerate(points_by_series):
        color = PALETTE[i % len(PALETTE)]
        if len(pts) >= 2:
            coords = " ".join(f"{_fmt(sx(u))},{_fmt(sy(v))}" for u, v in pts)
            out.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.8"/>'
            )
        elif len(pts) == 1:
            u, v = pts[0]
            out.append(
                f'<circle cx="{_fmt(sx(u))}" cy="{_fmt(sy(v))}" r="3" '
                f'fill="{color}"/>'
            )
        ly = _MT + 16 + 16 * i
        out.append(
            f'<line x1="{_ML + plot_w - 150}" y1="{ly - 4}" '
            f'x2="{_ML + plot_w - 126}" y2="{ly - 4}" stroke="{color}" '
            f'stroke-width="1.8"/>'
        )
        out.append(
            f'<text x="{_ML + plot_w - 120}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
