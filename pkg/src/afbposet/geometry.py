"""Plane diagrams with exact rational coordinates.

A diagram holds vertex positions and y-monotone polyline edges.  All
geometric decisions are made with exact arithmetic: coordinates are
:class:`fractions.Fraction` and predicates run on integers obtained by
clearing denominators.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .errors import DiagramError, PosetError
from .poset import Poset


def rational(value):
    """Parse ``"p/q"``, an integer, or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DiagramError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise DiagramError(f"not a rational: {value!r}") from None
    raise DiagramError(f"not a rational: {value!r} (floats are not accepted)")


def fmt(q):
    return str(Fraction(q))


@dataclass(frozen=True)
class Edge:
    lower: str
    upper: str
    bends: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bends", tuple((rational(x), rational(y)) for x, y in self.bends))


class PlaneDiagram:
    """A drawing of an order diagram.

    ``vertices`` maps id to ``(x, y)``; each edge runs from its lower to
    its upper endpoint through optional bend points.
    """

    def __init__(self, vertices, edges):
        self.vertices = {str(k): (rational(x), rational(y)) for k, (x, y) in vertices.items()}
        self.edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        self._poset = None

    def __repr__(self):
        return f"PlaneDiagram({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __eq__(self, other):
        return (
            isinstance(other, PlaneDiagram)
            and self.vertices == other.vertices
            and sorted(self.edges, key=_edge_key) == sorted(other.edges, key=_edge_key)
        )

    @property
    def poset(self):
        if self._poset is None:
            self._poset = Poset(self.vertices, [(e.lower, e.upper) for e in self.edges])
        return self._poset

    def points(self, edge):
        """The polyline of ``edge`` from lower endpoint to upper endpoint."""
        return (self.vertices[edge.lower],) + edge.bends + (self.vertices[edge.upper],)

    def edge_between(self, a, b):
        for e in self.edges:
            if {e.lower, e.upper} == {a, b}:
                return e
        return None

    def to_dict(self):
        return {
            "vertices": [
                {"id": v, "x": fmt(x), "y": fmt(y)} for v, (x, y) in sorted(self.vertices.items())
            ],
            "edges": [
                {"lower": e.lower, "upper": e.upper, "bends": [[fmt(x), fmt(y)] for x, y in e.bends]}
                for e in sorted(self.edges, key=_edge_key)
            ],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data):
        try:
            verts = {}
            for v in data["vertices"]:
                vid = str(v["id"])
                if vid in verts:
                    raise DiagramError(f"duplicate vertex id {vid!r}")
                verts[vid] = (rational(v["x"]), rational(v["y"]))
            edges = [
                Edge(str(e["lower"]), str(e["upper"]), tuple(tuple(b) for b in e.get("bends", [])))
                for e in data.get("edges", [])
            ]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DiagramError):
                raise
            raise DiagramError(f"malformed diagram JSON: {exc}") from None
        return cls(verts, edges)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def mirrored(self):
        """Reflect in the vertical axis (x -> -x)."""
        out = PlaneDiagram(
            {v: (-x, y) for v, (x, y) in self.vertices.items()},
            [Edge(e.lower, e.upper, tuple((-x, y) for x, y in e.bends)) for e in self.edges],
        )
        out._poset = self._poset
        return out

    def subdiagram(self, keep):
        keep = set(keep)
        return PlaneDiagram(
            {v: p for v, p in self.vertices.items() if v in keep},
            [e for e in self.edges if e.lower in keep and e.upper in keep],
        )


def _edge_key(e):
    return (e.lower, e.upper)


# -- exact predicates -----------------------------------------------------


def orient(a, b, c):
    """Sign of the cross product (b - a) x (c - a)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p, a, b):
    """p lies on the closed segment ab."""
    if orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_intersect(a, b, c, d):
    """Closed segments ab and cd share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and on_segment(c, a, b):
        return True
    if o2 == 0 and on_segment(d, a, b):
        return True
    if o3 == 0 and on_segment(a, c, d):
        return True
    if o4 == 0 and on_segment(b, c, d):
        return True
    return False


def point_in_polygon(p, poly):
    """Crossing-number test; ``poly`` is a closed list of points.

    Edges traversed twice cancel out, so face walks that run along a
    bridge in both directions are handled.  ``p`` must not lie on the
    polygon.
    """
    inside = False
    n = len(poly)
    px, py = p
    for k in range(n):
        (ax, ay), (bx, by) = poly[k], poly[(k + 1) % n]
        if (ay > py) != (by > py):
            # x-coordinate of the crossing compared with px, exactly
            s = (bx - ax) * (py - ay) - (px - ax) * (by - ay)
            if (s > 0) == (by > ay):
                inside = not inside
    return inside


def _integerize(points):
    den = 1
    for x, y in points:
        den = lcm(den, x.denominator, y.denominator)
    return den


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    items: tuple

    def to_dict(self):
        return {"kind": self.kind, "items": [str(i) for i in self.items]}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        return {v.kind for v in self.violations}

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def _scaled(d):
    pts = list(d.vertices.values()) + [b for e in d.edges for b in e.bends]
    den = _integerize(pts)

    def lift(p):
        x, y = p
        return x.numerator * (den // x.denominator), y.numerator * (den // y.denominator)

    verts = {v: lift(p) for v, p in d.vertices.items()}
    polys = []
    for e in d.edges:
        if e.lower in verts and e.upper in verts:
            polys.append((e, [verts[e.lower]] + [lift(b) for b in e.bends] + [verts[e.upper]]))
    return verts, polys


def _candidate_pairs(segs, is_new, partial):
    """Segment pairs from different edges whose bounding boxes overlap.

    A sweep over the segments sorted by left end.  With ``partial`` set,
    only pairs involving at least one new segment are produced.
    """
    segs = sorted(segs, key=lambda s: s[4])
    new_pos = [k for k, s in enumerate(segs) if is_new[s[0]]]
    for i, s in enumerate(segs):
        n1, _, a, b, x0, x1, y0, y1 = s
        if partial and not is_new[n1]:
            later = (segs[k] for k in new_pos[bisect_right(new_pos, i):])
        else:
            later = (segs[k] for k in range(i + 1, len(segs)))
        for t in later:
            if t[4] > x1:
                break
            if t[0] != n1 and t[6] <= y1 and y0 <= t[7]:
                yield (n1, a, b), (t[0], t[2], t[3])


def validate(d, fresh=None):
    """Check every diagram invariant and report all violations found.

    ``fresh`` is an optional set of vertex ids.  When given, the rest of
    the drawing is assumed to be valid already, and only pairs of edges
    with at least one edge at a fresh vertex are tested against each other.
    """
    report = ValidationReport()
    bad = report.violations.append

    for e in d.edges:
        for end in (e.lower, e.upper):
            if end not in d.vertices:
                bad(Violation("UnknownVertex", (end,)))
        if e.lower == e.upper:
            bad(Violation("SelfLoop", (e.lower,)))
    if report.violations:
        return report

    seen = set()
    for e in d.edges:
        k = frozenset((e.lower, e.upper))
        if k in seen:
            bad(Violation("DuplicateEdge", (e.lower, e.upper)))
        seen.add(k)

    # scaled coordinates are integers, so grouping and comparing them is exact
    verts, polys = _scaled(d)
    ids = sorted(d.vertices)
    by_x, by_y = {}, {}
    for v in ids:
        x, y = verts[v]
        by_x.setdefault(x, []).append(v)
        by_y.setdefault(y, []).append(v)
    for coord, group in sorted(by_x.items()):
        if len(group) > 1:
            bad(Violation("SameX", tuple(group)))
    for coord, group in sorted(by_y.items()):
        if len(group) > 1:
            bad(Violation("SameY", tuple(group)))

    for e, pts in polys:
        if any(pts[k + 1][1] <= pts[k][1] for k in range(len(pts) - 1)):
            bad(Violation("NotMonotone", (e.lower, e.upper)))

    if fresh is None:
        is_new = [True] * len(polys)
    else:
        is_new = [e.lower in fresh or e.upper in fresh for e, _ in polys]

    segs = []
    for n, (e, pts) in enumerate(polys):
        for k in range(len(pts) - 1):
            a, b = pts[k], pts[k + 1]
            segs.append((n, k, a, b, min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1])))

    new_segs = [sg for sg in segs if is_new[sg[0]]]
    probe = ids
    if fresh is not None:
        # old segments outside the box around everything new cannot meet it
        boxes = [sg[4:] for sg in new_segs] + [(x, x, y, y) for v, (x, y) in verts.items() if v in fresh]
        if boxes:
            bx0 = min(b[0] for b in boxes)
            bx1 = max(b[1] for b in boxes)
            by0 = min(b[2] for b in boxes)
            by1 = max(b[3] for b in boxes)
            segs = [sg for sg in segs if sg[4] <= bx1 and bx0 <= sg[5] and sg[6] <= by1 and by0 <= sg[7]]
            probe = [v for v in ids if bx0 <= verts[v][0] <= bx1 and by0 <= verts[v][1] <= by1]
        else:
            segs = probe = []

    # vertex lying on an edge it does not end at
    for v in probe:
        p = verts[v]
        pool = segs if fresh is None or v in fresh else new_segs
        for n, k, a, b, x0, x1, y0, y1 in pool:
            e = polys[n][0]
            if v in (e.lower, e.upper):
                continue
            if x0 <= p[0] <= x1 and y0 <= p[1] <= y1 and on_segment(p, a, b):
                bad(Violation("EdgeThroughVertex", (e.lower, e.upper, v)))

    crossed = set()
    for (n1, a, b), (n2, c, dd) in _candidate_pairs(segs, is_new, fresh is not None):
        key = (min(n1, n2), max(n1, n2))
        if key in crossed:
            continue
        e1 = polys[n1][0]
        e2 = polys[n2][0]
        if not segments_intersect(a, b, c, dd):
            continue
        shared = {e1.lower, e1.upper} & {e2.lower, e2.upper}
        allowed = False
        for s in shared:
            p = verts[s]
            if p in (a, b) and p in (c, dd):
                q1 = b if p == a else a
                q2 = dd if p == c else c
                collinear_same_way = orient(p, q1, q2) == 0 and (
                    (q1[0] - p[0]) * (q2[0] - p[0]) + (q1[1] - p[1]) * (q2[1] - p[1]) > 0
                )
                allowed = not collinear_same_way
        if not allowed:
            crossed.add(key)
            pair = sorted([(e1.lower, e1.upper), (e2.lower, e2.upper)])
            bad(Violation("EdgeCrossing", (pair[0][0], pair[0][1], pair[1][0], pair[1][1])))

    try:
        d.poset
    except PosetError as exc:
        items = getattr(exc, "pair", None) or getattr(exc, "cycle", None) or ()
        kind = "NotHasse" if exc.__class__.__name__ == "RedundantCover" else "CyclicCovers"
        bad(Violation(kind, tuple(items)))
    return report
