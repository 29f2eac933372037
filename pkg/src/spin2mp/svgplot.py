"""Minimal deterministic SVG line plots.

No plotting dependency: figures are emitted as hand-built SVG text with
fixed geometry and fixed number formatting, so rerunning a sweep produces
byte-identical files.
"""
import numpy as np

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 44, 56
PALETTE = ("#1f5fa8", "#c44e52", "#3a923a", "#8172b2")


def _fmt(v):
    return "%.6g" % float(v)


def _finite_xy(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    return xs[keep], ys[keep]


def _inset_panel(label, xs, ys, px0, px1, py0, py1):
    """Small framed panel with independent scales, anchored top right."""
    iw = int(round(0.38 * (px1 - px0)))
    ih = int(round(0.34 * (py0 - py1)))
    ix1 = px1 - 14
    ix0 = ix1 - iw
    iy1 = py1 + 14
    iy0 = iy1 + ih
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 - x0 == 0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 - y0 == 0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def X(x):
        return ix0 + (x - x0) / (x1 - x0) * (ix1 - ix0)

    def Y(y):
        return iy0 + (y - y0) / (y1 - y0) * (iy1 - iy0)

    parts = []
    parts.append('<rect x="%d" y="%d" width="%d" height="%d" fill="white" '
                 'stroke="black" stroke-width="0.8"/>' % (ix0, iy1, iw, ih))
    parts.append('<text x="%d" y="%d" font-family="sans-serif" '
                 'font-size="11" text-anchor="middle">%s</text>'
                 % ((ix0 + ix1) // 2, iy1 - 4, label))
    for t, anchor in ((x0, "start"), (x1, "end")):
        parts.append('<text x="%s" y="%d" font-family="sans-serif" '
                     'font-size="9" text-anchor="%s">%s</text>'
                     % (_fmt(X(t)), iy0 + 11, anchor, _fmt(t)))
    for t in (y0, y1):
        parts.append('<text x="%d" y="%s" font-family="sans-serif" '
                     'font-size="9" text-anchor="end">%s</text>'
                     % (ix0 - 3, _fmt(float(Y(t)) + 3), _fmt(t)))
    pts = " ".join("%s,%s" % (_fmt(X(x)), _fmt(Y(y)))
                   for x, y in zip(xs, ys))
    parts.append('<polyline fill="none" stroke="%s" stroke-width="1.2" '
                 'points="%s"/>' % (PALETTE[1], pts))
    return parts


def render_line_svg(curves, title, xlabel, ylabel, inset=None):
    """SVG text for a set of labelled curves.

    curves is a sequence of (label, xs, ys); non-finite samples are dropped
    before autoscaling.  inset, if given, is a single (label, xs, ys) curve
    drawn in a second small panel inside the top right of the main axes,
    with its own scales.
    """
    cleaned = [(label, *_finite_xy(xs, ys)) for label, xs, ys in curves]
    all_x = np.concatenate([c[1] for c in cleaned if len(c[1])])
    all_y = np.concatenate([c[2] for c in cleaned if len(c[2])])
    x0, x1 = float(all_x.min()), float(all_x.max())
    y0, y1 = float(all_y.min()), float(all_y.max())
    if x1 - x0 == 0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 - y0 == 0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    px0, px1 = MARGIN_L, WIDTH - MARGIN_R
    py0, py1 = HEIGHT - MARGIN_B, MARGIN_T

    def X(x):
        return px0 + (x - x0) / (x1 - x0) * (px1 - px0)

    def Y(y):
        return py0 + (y - y0) / (y1 - y0) * (py1 - py0)

    out = []
    out.append('<svg xmlns="http://www.w3.org/2000/svg" width="%d" height="%d" '
               'viewBox="0 0 %d %d">' % (WIDTH, HEIGHT, WIDTH, HEIGHT))
    out.append('<rect width="%d" height="%d" fill="white"/>' % (WIDTH, HEIGHT))
    out.append('<text x="%d" y="26" font-family="sans-serif" font-size="16" '
               'text-anchor="middle">%s</text>' % (WIDTH // 2, title))
    # frame
    out.append('<rect x="%d" y="%d" width="%d" height="%d" fill="none" '
               'stroke="black" stroke-width="1"/>'
               % (px0, py1, px1 - px0, py0 - py1))
    # ticks and grid
    for t in np.linspace(x0, x1, 5):
        xp = X(t)
        out.append('<line x1="%s" y1="%d" x2="%s" y2="%d" stroke="black"/>'
                   % (_fmt(xp), py0, _fmt(xp), py0 + 5))
        out.append('<text x="%s" y="%d" font-family="sans-serif" '
                   'font-size="11" text-anchor="middle">%s</text>'
                   % (_fmt(xp), py0 + 20, _fmt(t)))
    for t in np.linspace(y0, y1, 5):
        yp = Y(t)
        out.append('<line x1="%d" y1="%s" x2="%d" y2="%s" stroke="black"/>'
                   % (px0 - 5, _fmt(yp), px0, _fmt(yp)))
        out.append('<text x="%d" y="%s" font-family="sans-serif" '
                   'font-size="11" text-anchor="end">%s</text>'
                   % (px0 - 8, _fmt(float(yp) + 4), _fmt(t)))
    out.append('<text x="%d" y="%d" font-family="sans-serif" font-size="13" '
               'text-anchor="middle">%s</text>'
               % ((px0 + px1) // 2, HEIGHT - 14, xlabel))
    out.append('<text x="18" y="%d" font-family="sans-serif" font-size="13" '
               'text-anchor="middle" transform="rotate(-90 18 %d)">%s</text>'
               % ((py0 + py1) // 2, (py0 + py1) // 2, ylabel))

    # legend moves to the left when an inset occupies the top right corner
    lx = px0 + 12 if inset is not None else px1 - 150
    for k, (label, xs, ys) in enumerate(cleaned):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join("%s,%s" % (_fmt(X(x)), _fmt(Y(y)))
                       for x, y in zip(xs, ys))
        out.append('<polyline fill="none" stroke="%s" stroke-width="1.5" '
                   'points="%s"/>' % (color, pts))
        ly = MARGIN_T + 16 + 18 * k
        out.append('<line x1="%d" y1="%d" x2="%d" y2="%d" stroke="%s" '
                   'stroke-width="2"/>' % (lx, ly - 4, lx + 30, ly - 4, color))
        out.append('<text x="%d" y="%d" font-family="sans-serif" '
                   'font-size="12">%s</text>' % (lx + 38, ly, label))
    if inset is not None:
        ilabel, ixs, iys = inset
        ixs, iys = _finite_xy(ixs, iys)
        if len(ixs):
            out.extend(_inset_panel(ilabel, ixs, iys, px0, px1, py0, py1))
    out.append('</svg>')
    return "\n".join(out) + "\n"
