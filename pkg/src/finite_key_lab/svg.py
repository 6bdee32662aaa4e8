"""Minimal hand-emitted SVG line charts (no plotting dependency).

One polyline per series on a log10 x-axis and linear y-axis, with decade
ticks, a y grid and an inline legend.  Output is a plain string built in a
fixed order, so identical inputs give byte-identical files.
"""

import math

_WIDTH, _HEIGHT = 720.0, 480.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70.0, 20.0, 20.0, 50.0
_COLORS = ("#000000", "#c02020", "#2040c0", "#208040", "#a06010", "#602080")


def _fmt(value):
    return f"{value:.2f}"


def _nice_ceiling(value):
    if value <= 0.0:
        return 1.0
    magnitude = 10.0 ** math.floor(math.log10(value))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if value <= mult * magnitude:
            return mult * magnitude
    return 10.0 * magnitude


def line_chart(x_values, series, title="", x_label="", y_label=""):
    """Render series over a shared log10 x-axis.

    ``series`` is a list of (label, y_values) pairs; y values may contain
    None for missing points (the polyline is broken there).
    """
    xs = [float(x) for x in x_values]
    if not xs or any(x <= 0.0 for x in xs):
        raise ValueError("log-scale x values must be positive and non-empty")
    log_lo = math.floor(math.log10(min(xs)))
    log_hi = math.ceil(math.log10(max(xs)))
    if log_hi == log_lo:
        log_hi += 1

    y_max = 0.0
    for _, ys in series:
        for y in ys:
            if y is not None:
                y_max = max(y_max, float(y))
    y_max = _nice_ceiling(y_max if y_max > 0.0 else 1.0)

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x):
        return _MARGIN_L + plot_w * (math.log10(x) - log_lo) / (log_hi - log_lo)

    def sy(y):
        return _MARGIN_T + plot_h * (1.0 - y / y_max)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_WIDTH)}" '
        f'height="{int(_HEIGHT)}" viewBox="0 0 {int(_WIDTH)} {int(_HEIGHT)}">',
        f'<rect width="{int(_WIDTH)}" height="{int(_HEIGHT)}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(_WIDTH / 2)}" y="14" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>'
        )

    # axes
    x0, y0 = _MARGIN_L, _MARGIN_T + plot_h
    parts.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0 + plot_w)}" '
        f'y2="{_fmt(y0)}" stroke="#000000"/>'
    )
    parts.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" '
        f'y2="{_fmt(_MARGIN_T)}" stroke="#000000"/>'
    )

    # decade ticks
    for exponent in range(log_lo, log_hi + 1):
        px = sx(10.0**exponent)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(y0)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(y0 + 5)}" stroke="#000000"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{_fmt(y0 + 18)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">1e{exponent}</text>'
        )

    # y grid, 5 divisions
    for i in range(6):
        y_val = y_max * i / 5.0
        py = sy(y_val)
        if i > 0:
            parts.append(
                f'<line x1="{_fmt(x0)}" y1="{_fmt(py)}" '
                f'x2="{_fmt(x0 + plot_w)}" y2="{_fmt(py)}" '
                f'stroke="#dddddd"/>'
            )
        parts.append(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{y_val:.3g}</text>'
        )

    if x_label:
        parts.append(
            f'<text x="{_fmt(x0 + plot_w / 2)}" y="{_fmt(_HEIGHT - 8)}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12">'
            f"{x_label}</text>"
        )
    if y_label:
        cx, cy = 16.0, _MARGIN_T + plot_h / 2
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 {_fmt(cx)} {_fmt(cy)})">{y_label}</text>'
        )

    # data polylines (broken at missing points)
    for idx, (label, ys) in enumerate(series):
        color = _COLORS[idx % len(_COLORS)]
        segment = []
        segments = []
        for x, y in zip(xs, ys):
            if y is None:
                if segment:
                    segments.append(segment)
                segment = []
            else:
                segment.append((sx(x), sy(min(float(y), y_max))))
        if segment:
            segments.append(segment)
        for seg in segments:
            points = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in seg)
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{points}"/>'
            )
        # legend entry
        ly = _MARGIN_T + 16.0 * idx + 10.0
        lx = x0 + plot_w - 150.0
        parts.append(
            f'<line x1="{_fmt(lx)}" y1="{_fmt(ly)}" x2="{_fmt(lx + 24)}" '
            f'y2="{_fmt(ly)}" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 30)}" y="{_fmt(ly + 4)}" '
            f'font-family="sans-serif" font-size="11">{label}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
