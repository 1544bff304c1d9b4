"""Minimal deterministic SVG line charts.

Hand-rolled on purpose: the output must be a pure function of the input
data, byte for byte, which rules out plotting libraries that embed session
ids or timestamps.
"""
from __future__ import annotations

from dataclasses import dataclass

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 44, 52


@dataclass
class Series:
    name: str
    xs: list
    ys: list
    errs: list | None = None


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _data_range(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def line_chart(series: list[Series], title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Render series as one SVG document string."""
    if not series or all(len(s.xs) == 0 for s in series):
        raise ValueError("nothing to plot")
    xs_all = [x for s in series for x in s.xs]
    ys_all = []
    for s in series:
        for i, y in enumerate(s.ys):
            e = s.errs[i] if s.errs else 0.0
            ys_all.extend((y - e, y + e))
    x_lo, x_hi = _data_range(xs_all)
    y_lo, y_hi = _data_range(ys_all)
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(title)}</text>'
        )
    # ticks
    for i in range(5):
        fx = x_lo + (x_hi - x_lo) * i / 4
        cx = px(fx)
        out.append(
            f'<line x1="{cx:.2f}" y1="{HEIGHT - MARGIN_B}" x2="{cx:.2f}" '
            f'y2="{HEIGHT - MARGIN_B + 5}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{cx:.2f}" y="{HEIGHT - MARGIN_B + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(fx)}</text>'
        )
        fy = y_lo + (y_hi - y_lo) * i / 4
        cy = py(fy)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{cy:.2f}" x2="{MARGIN_L}" y2="{cy:.2f}" '
            'stroke="#333333"/>'
        )
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{cy + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(fy)}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_escape(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="16" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {MARGIN_T + plot_h / 2:.1f})">{_escape(ylabel)}</text>'
        )
    for si, s in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        pts = sorted(zip(s.xs, s.ys, s.errs if s.errs else [0.0] * len(s.xs)))
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y, _ in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y, e in pts:
            cx, cy = px(x), py(y)
            if e > 0:
                y0, y1 = py(y - e), py(y + e)
                out.append(
                    f'<line x1="{cx:.2f}" y1="{y0:.2f}" x2="{cx:.2f}" y2="{y1:.2f}" '
                    f'stroke="{color}" stroke-width="1"/>'
                )
                for yy in (y0, y1):
                    out.append(
                        f'<line x1="{cx - 3:.2f}" y1="{yy:.2f}" x2="{cx + 3:.2f}" '
                        f'y2="{yy:.2f}" stroke="{color}" stroke-width="1"/>'
                    )
            out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5" fill="{color}"/>')
        ly = MARGIN_T + 14 + 16 * si
        lx = WIDTH - MARGIN_R - 150
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 28}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{_escape(s.name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
