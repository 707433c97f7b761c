"""SVG rendering of plane diagrams with optional overlays."""

from __future__ import annotations

from xml.sax.saxutils import escape

WIDTH = 600
MARGIN = 30
RADIUS = 4


def _transform(points):
    """Map exact coordinates to screen floats, y pointing down."""
    xs = [float(p[0]) for p in points] or [0.0]
    ys = [float(p[1]) for p in points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    scale = (WIDTH - 2 * MARGIN) / span
    height = (y1 - y0) * scale + 2 * MARGIN

    def tr(p):
        return (MARGIN + (float(p[0]) - x0) * scale, height - MARGIN - (float(p[1]) - y0) * scale)

    return tr, WIDTH, height


def _num(v):
    return f"{v:.3f}"


def _path_d(pts, closed=False):
    d = "M " + " L ".join(f"{_num(x)} {_num(y)}" for x, y in pts)
    return d + " Z" if closed else d


def render_svg(d, envelope=None, paths=(), labels=None):
    """Render ``d`` as an SVG document (a string).

    ``envelope`` is an :class:`Envelope` or a sequence of minimal elements,
    drawn as one closed dashed curve through them.  ``paths`` is a sequence
    of :class:`WitnessPath` objects; left-most paths are dotted and
    right-most paths bold.  ``labels`` maps vertex ids to extra text; by
    default vertices are labelled with their ids.
    """
    pts = list(d.vertices.values()) + [b for e in d.edges for b in e.bends]
    tr, w, h = _transform(pts)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(w)}" height="{_num(h)}" '
        f'viewBox="0 0 {_num(w)} {_num(h)}">',
        '<g class="edges" stroke="black" fill="none" stroke-width="1">',
    ]
    for e in sorted(d.edges, key=lambda e: (e.lower, e.upper)):
        line = [tr(p) for p in d.points(e)]
        out.append(f'<path class="edge" data-lower="{escape(e.lower)}" data-upper="{escape(e.upper)}" '
                   f'd="{_path_d(line)}"/>')
    out.append("</g>")

    if envelope is not None:
        order = getattr(envelope, "order", envelope)
        ring = [tr(d.vertices[m]) for m in order]
        if len(ring) == 1:
            x, y = ring[0]
            ring = [(x - 8, y + 8), (x + 8, y + 8), (x, y - 8)]
        elif len(ring) == 2:
            (xa, ya), (xb, yb) = ring
            ring = [(xa, ya + 6), (xb, yb + 6), (xb, yb - 6), (xa, ya - 6)]
        out.append(f'<path class="envelope" stroke="gray" fill="none" stroke-dasharray="6 4" '
                   f'd="{_path_d(ring, closed=True)}"/>')

    for p in paths:
        line = [tr(d.vertices[v]) for v in p.vertices]
        if p.side == "left":
            style = 'stroke="blue" stroke-width="2" stroke-dasharray="2 3"'
        else:
            style = 'stroke="red" stroke-width="3.5"'
        out.append(f'<path class="witness-{p.side}" fill="none" {style} d="{_path_d(line)}"/>')

    out.append('<g class="vertices">')
    for v in sorted(d.vertices):
        x, y = tr(d.vertices[v])
        out.append(f'<circle class="vertex" data-id="{escape(v)}" cx="{_num(x)}" cy="{_num(y)}" r="{RADIUS}"/>')
    out.append("</g>")
    text = dict(labels) if labels else {}
    out.append('<g class="labels" font-family="sans-serif" font-size="11">')
    for v in sorted(d.vertices):
        x, y = tr(d.vertices[v])
        t = text.get(v, v)
        out.append(f'<text x="{_num(x + 6)}" y="{_num(y - 6)}">{escape(str(t))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
