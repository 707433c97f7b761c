"""Combinatorial embedding of a validated plane diagram.

The rotation system lists, for every vertex, its upper covers and lower
covers from left to right (by the direction of the first polyline segment
at that vertex).  Faces are traced on darts ``(u, v)`` with the face on the
left: the successor of ``u -> v`` is ``v -> w`` where ``w`` is the neighbour
of ``v`` just clockwise of ``u``.  Bounded faces therefore come out
counter-clockwise and outer faces clockwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AFBViolation,
    BoundaryNotSimple,
    NotAFB,
    NotBelowY,
    NotComparable,
    NotConnected,
    NotIncomparable,
    NotInDownset,
    NotInUpset,
    NotValidated,
    UniquenessViolated,
)
from .geometry import point_in_polygon, validate

LEFT, RIGHT, INSIDE, OUTSIDE = "Left", "Right", "Inside", "Outside"


def _slope_key(base, toward):
    dy = toward[1] - base[1]
    return Fraction(toward[0] - base[0]) / (dy if dy > 0 else -dy)


class EmbeddedDiagram:
    """Rotation system, faces and per-minimal wedge faces of a diagram.

    Treat instances as immutable; query results are cached on the object.
    """

    def __init__(self, diagram, check=True, base=None, _adjacency=None):
        if check:
            report = validate(diagram)
            if not report.ok:
                raise NotValidated(report)
        self.diagram = diagram
        self.poset = P = diagram.poset
        self.y_key = {v: p[1] for v, p in diagram.vertices.items()}
        self.x_key = {v: p[0] for v, p in diagram.vertices.items()}

        self._poly = {}
        for e in diagram.edges:
            pts = diagram.points(e)
            self._poly[(e.lower, e.upper)] = pts
            self._poly[(e.upper, e.lower)] = pts[::-1]
        if _adjacency is None:
            self.up, self.down = self._sorted_adjacency(base)
        else:
            self.up, self.down = _adjacency
        # ccw cyclic order: upper covers right to left, then lower covers left to right
        self.rotation = {v: self.up[v][::-1] + self.down[v] for v in P.elements}
        self._rpos = {v: {w: k for k, w in enumerate(r)} for v, r in self.rotation.items()}

        self.faces = []
        self.face_of = {}
        for v in P.elements:
            for w in self.rotation[v]:
                dart = (v, w)
                if dart in self.face_of:
                    continue
                fid = len(self.faces)
                walk = []
                d = dart
                while d not in self.face_of:
                    self.face_of[d] = fid
                    walk.append(d)
                    d = self.next_dart(d)
                self.faces.append(tuple(walk))
        for v in P.elements:
            if not self.rotation[v]:
                self.faces.append(())
                self.face_of[(v, None)] = len(self.faces) - 1

        self.wedge = {}
        for m in P.minimal_elements():
            if self.up[m]:
                self.wedge[m] = self.face_of[(m, self.up[m][0])]
            else:
                self.wedge[m] = self.face_of[(m, None)]

        self.components = P.components()
        self.component_of = {v: k for k, comp in enumerate(self.components) for v in comp}
        self.lowest = [min(comp, key=lambda v: self.y_key[v]) for comp in self.components]
        self.outer_faces = [self.wedge[v] for v in self.lowest]
        self.nested = []
        for k, comp in enumerate(self.components):
            p = diagram.vertices[self.lowest[k]]
            inside = False
            for j, other in enumerate(self.components):
                if j == k or len(other) < 2:
                    continue
                if point_in_polygon(p, self.face_polygon(self.outer_faces[j])):
                    inside = True
                    break
            self.nested.append(inside)
        self.exterior_faces = frozenset(
            f for k, f in enumerate(self.outer_faces) if not self.nested[k]
        )
        glob = min(P.elements, key=lambda v: self.y_key[v]) if P.elements else None
        self.outer_face = self.wedge[glob] if glob is not None else None
        self._dfs_cache = {}
        self._cache = {}

    def _sorted_adjacency(self, base):
        """Upper and lower covers sorted left to right.

        With ``base`` (an embedding of an earlier version of the drawing)
        the lists of vertices whose surroundings did not change are reused.
        """
        d, P = self.diagram, self.poset
        touched = set(P.elements)
        if base is not None:
            bd = base.diagram
            touched = {v for v, p in d.vertices.items() if bd.vertices.get(v) != p}
            old = {(e.lower, e.upper): e for e in bd.edges}
            for e in d.edges:
                o = old.pop((e.lower, e.upper), None)
                if o is not e and o != e:
                    touched.update((e.lower, e.upper))
            for lo, hi in old:
                touched.update((lo, hi))
        up = {v: [] for v in touched}
        down = {v: [] for v in touched}
        for e in d.edges:
            if e.lower in touched:
                pts = self._poly[(e.lower, e.upper)]
                up[e.lower].append((_slope_key(pts[0], pts[1]), e.upper))
            if e.upper in touched:
                pts = self._poly[(e.lower, e.upper)]
                down[e.upper].append((_slope_key(pts[-1], pts[-2]), e.lower))
        ups, downs = {}, {}
        for v in P.elements:
            if v in touched:
                ups[v] = tuple(w for _, w in sorted(up[v]))
                downs[v] = tuple(w for _, w in sorted(down[v]))
            else:
                ups[v], downs[v] = base.up[v], base.down[v]
        return ups, downs

    def mirrored(self):
        """The embedding of the mirror image (x -> -x) of the drawing."""
        flip = lambda adj: {v: ws[::-1] for v, ws in adj.items()}
        return EmbeddedDiagram(self.diagram.mirrored(), check=False,
                               _adjacency=(flip(self.up), flip(self.down)))

    def __repr__(self):
        return f"EmbeddedDiagram({len(self.poset)} vertices, {len(self.faces)} faces)"

    def next_dart(self, dart):
        u, v = dart
        rot = self.rotation[v]
        return (v, rot[(self._rpos[v][u] - 1) % len(rot)])

    def face_polygon(self, fid):
        pts = []
        for d in self.faces[fid]:
            pts.extend(self._poly[d][:-1])
        return pts

    def dart_points(self, dart):
        return self._poly[dart]

    def face_count(self, component=None):
        if component is None:
            return len(self.faces)
        comp = set(self.components[component])
        return len({self.face_of[d] for d in self.face_of if d[0] in comp})

    # -- AFB ------------------------------------------------------------

    def afb_check(self):
        """Return ``(is_afb, violators)`` over all minimal elements."""
        violators = [m for m in self.poset.minimal_elements() if self.wedge[m] not in self.exterior_faces]
        return (not violators, violators)

    def require_afb(self):
        ok, bad = self.afb_check()
        if not ok:
            raise NotAFB(bad)

    # -- depth-first linear extensions -----------------------------------

    def dfs_order(self, z, side="left", downward=False):
        """Visit order of the depth-first search of U_P[z] (or D_P[z]).

        An element is entered only once all of its covers inside the
        region on the side the search came from have been visited.
        """
        key = (z, side, downward)
        hit = self._dfs_cache.get(key)
        if hit is not None:
            return hit
        P = self.poset
        region = P.downset(z) if downward else P.upset(z)
        nxt = self.down if downward else self.up
        # waiting[w]: covers of w inside the region not yet visited
        idx = P.index
        mask = (P._down if downward else P._up)[idx[z]]
        back = P._ucmask if downward else P._lcmask
        waiting = {w: (mask & back[idx[w]]).bit_count() for w in region}
        order = [z]
        seen = {z}
        stack = [z]
        if side == "left":
            kids_of = nxt
        else:
            kids_of = {v: nxt[v][::-1] for v in region}
        for w in kids_of[z]:
            waiting[w] -= 1
        while stack:
            v = stack[-1]
            for w in kids_of[v]:
                if w not in seen and not waiting[w]:
                    seen.add(w)
                    order.append(w)
                    stack.append(w)
                    for c in kids_of[w]:
                        waiting[c] -= 1
                    break
            else:
                stack.pop()
        result = tuple(order)
        self._dfs_cache[key] = result
        return result

    def _positions(self, z, downward):
        key = ("pos", z, downward)
        hit = self._cache.get(key)
        if hit is None:
            l1 = self.dfs_order(z, "left", downward)
            l2 = self.dfs_order(z, "right", downward)
            hit = ({v: k for k, v in enumerate(l1)}, {v: k for k, v in enumerate(l2)})
            self._cache[key] = hit
        return hit

    def _label(self, z, x, y, downward):
        p1, p2 = self._positions(z, downward)
        before1 = p1[x] < p1[y]
        before2 = p2[x] < p2[y]
        if before1 and not before2:
            return LEFT
        if before2 and not before1:
            return RIGHT
        return INSIDE if before1 else OUTSIDE

    def classify_in_upset(self, z, x, y):
        """Left / Right / Inside / Outside label of (x, y) in U_P[z]."""
        P = self.poset
        if not (P.le(z, x) and P.le(z, y)):
            raise NotInUpset(f"{x} and {y} must both lie above {z}")
        if P.comparable(x, y):
            raise NotIncomparable(f"{x} and {y} are comparable")
        return self._label(z, x, y, False)

    def label_in_downset(self, z, x, y):
        """The raw four-way label of (x, y) in D_P[z]."""
        P = self.poset
        if not (P.le(x, z) and P.le(y, z)):
            raise NotInDownset(f"{x} and {y} must both lie below {z}")
        if P.comparable(x, y):
            raise NotIncomparable(f"{x} and {y} are comparable")
        return self._label(z, x, y, True)

    def left_right_in_downset(self, z, x, y):
        label = self.label_in_downset(z, x, y)
        if label in (INSIDE, OUTSIDE):
            raise AFBViolation(f"({x}, {y}) is {label.lower()} in D[{z}]; impossible for an AFB diagram")
        return label

    def lr_order(self, y, elements):
        """Sort pairwise incomparable ``elements`` of D_P[y] left to right."""
        p1, p2 = self._positions(y, True)
        out = sorted(elements, key=lambda v: p1[v])
        for a, b in zip(out, out[1:]):
            if p2[a] < p2[b]:
                raise AFBViolation(f"({a}, {b}) is not left/right separated in D[{y}]")
        return out

    # -- enclosed pairs -----------------------------------------------------

    def enclosed_pairs(self):
        """All (x, y) with x inside y in U_P[z] for some z."""
        hit = self._cache.get("enclosed")
        if hit is not None:
            return hit
        P = self.poset
        out = set()
        for z in P.elements:
            region = sorted(P.upset(z))
            if len(region) < 3:
                continue
            p1, p2 = self._positions(z, False)
            for x in region:
                for y in region:
                    if x != y and p1[x] < p1[y] and p2[x] < p2[y] and not P.le(x, y):
                        out.add((x, y))
        out = frozenset(out)
        self._cache["enclosed"] = out
        return out

    def is_enclosed(self, x, y):
        P = self.poset
        if P.comparable(x, y):
            return False
        for z in P.downset(x) & P.downset(y):
            p1, p2 = self._positions(z, False)
            if p1[x] < p1[y] and p2[x] < p2[y]:
                return True
        return False

    # -- witnessing paths -----------------------------------------------------

    def extremal_path(self, x, y, side="left"):
        P = self.poset
        if not P.lt(x, y):
            raise NotComparable(f"{x} is not below {y}")
        path = [x]
        v = x
        while v != y:
            options = [w for w in self.up[v] if P.le(w, y)]
            v = options[0] if side == "left" else options[-1]
            path.append(v)
        return WitnessPath(tuple(path), side)

    # -- envelope -------------------------------------------------------------

    def envelope_order(self):
        """Minimal elements in counter-clockwise order along the envelope."""
        hit = self._cache.get("envelope")
        if hit is not None:
            return hit
        P = self.poset
        if not P.is_connected():
            raise NotConnected("the envelope is defined for connected diagrams")
        self.require_afb()
        mins = P.minimal_elements()
        if len(P) == 1:
            env = Envelope(tuple(mins), ())
        else:
            walk = self.faces[self.outer_face]
            where = {d: k for k, d in enumerate(walk)}
            cw = sorted(mins, key=lambda m: where[(m, self.up[m][0])])
            ccw = cw[::-1]
            s = ccw.index(min(mins))
            env = Envelope(tuple(ccw[s:] + ccw[:s]), walk)
        self._cache["envelope"] = env
        return env

    # -- z(y, m, m') and lens regions --------------------------------------

    def meet_z(self, y, m, m2):
        P = self.poset
        if not (P.le(m, y) and P.le(m2, y)):
            raise NotBelowY(f"{m} and {m2} must lie below {y}")
        Z = P.upset(m) & P.upset(m2) & P.downset(y)
        mins = [z for z in Z if not any(w != z and P.le(w, z) for w in Z)]
        if len(mins) != 1:
            raise UniquenessViolated(f"z({y}, {m}, {m2}) is not unique: {sorted(mins)}")
        return mins[0]

    def lens_region(self, y, m, m2):
        P = self.poset
        if m == m2 or not (P.is_minimal(m) and P.is_minimal(m2)):
            raise NotBelowY("lens regions need two distinct minimal elements")
        z = self.meet_z(y, m, m2)
        if self.left_right_in_downset(z, m, m2) == LEFT:
            w1 = self.extremal_path(m, z, "right")
            w2 = self.extremal_path(m2, z, "left")
        else:
            w1 = self.extremal_path(m, z, "left")
            w2 = self.extremal_path(m2, z, "right")
        if set(w1.vertices) & set(w2.vertices) != {z}:
            raise BoundaryNotSimple(f"witnessing paths from {m} and {m2} meet below {z}")
        env = self.envelope_order()
        walk = env.walk
        where = {d: k for k, d in enumerate(walk)}
        i = where[(m2, self.up[m2][0])]
        j = where[(m, self.up[m][0])]
        arc = []
        k = i
        while k != j:
            arc.append(walk[k])
            k = (k + 1) % len(walk)
        return LensRegion(self, y, m, m2, z, w1, w2, tuple(arc))


@dataclass(frozen=True)
class WitnessPath:
    vertices: tuple
    side: str

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class Envelope:
    order: tuple
    walk: tuple

    def position(self):
        return {m: k for k, m in enumerate(self.order)}

    def to_dict(self):
        return {"order": list(self.order), "walk": [list(d) for d in self.walk]}


class LensRegion:
    """The closed curve W[m, z] + W[m', z] + E[m, m'] and the region it bounds.

    The envelope arc is represented by the stretch of the outer-face walk
    that runs from m' back to m; only minimal elements separate the two.
    """

    def __init__(self, emb, y, m, m2, z, w1, w2, arc):
        self.emb = emb
        self.y, self.m, self.m2, self.z = y, m, m2, z
        self.paths = (w1, w2)
        self.arc = arc

    def boundary_darts(self):
        v1 = self.paths[0].vertices
        v2 = self.paths[1].vertices[::-1]
        darts = list(zip(v1, v1[1:])) + list(zip(v2, v2[1:])) + list(self.arc)
        return darts

    def boundary_polygon(self):
        pts = []
        for d in self.boundary_darts():
            pts.extend(self.emb.dart_points(d)[:-1])
        return pts

    def path_vertices(self):
        return set(self.paths[0].vertices) | set(self.paths[1].vertices)

    def classify_vertices(self):
        """Split vertices into (inside, boundary, outside).

        ``boundary`` holds the witnessing-path vertices and the minimal
        elements on the arc; other arc vertices sit between the arc and the
        envelope and so count as inside.
        """
        emb = self.emb
        darts = self.boundary_darts()
        # the boundary runs clockwise, so the region lies right of each dart;
        # a dart also run in reverse (the arc retracing a path) cancels out
        both = set(darts)
        live = [d for d in darts if (d[1], d[0]) not in both]
        cut = {frozenset(d) for d in live}
        outer = emb.outer_face
        seed = {emb.face_of[(d[1], d[0])] for d in live} - {outer}
        region = set()
        stack = list(seed)
        while stack:
            f = stack.pop()
            if f in region:
                continue
            region.add(f)
            for d in emb.faces[f]:
                if frozenset(d) in cut:
                    continue
                g = emb.face_of[(d[1], d[0])]
                if g != outer and g not in region:
                    stack.append(g)
        P = emb.poset
        touched = {v for f in region for d in emb.faces[f] for v in d}
        arc_vertices = {d[0] for d in self.arc} | {d[1] for d in self.arc}
        boundary = self.path_vertices() | {v for v in arc_vertices if P.is_minimal(v)}
        inside = (touched | arc_vertices) - boundary
        outside = set(P.elements) - inside - boundary
        return inside, boundary, outside


def to_embedding(diagram, check=True):
    return EmbeddedDiagram(diagram, check=check)


def afb_check(emb):
    return emb.afb_check()


def afb_by_ray(diagram):
    """Exact downward ray test of the AFB property (independent of faces).

    For each minimal m, take the point halfway between m and the first
    crossing of the downward vertical ray with the drawing (or one unit
    down if nothing is hit) and test whether it is enclosed by any
    component's boundary, or lies in a bounded face of m's own component.
    """
    emb = EmbeddedDiagram(diagram, check=False)
    P = diagram.poset
    segs = [pts for e in diagram.edges for pts in [diagram.points(e)]]
    bad = []
    for m in P.minimal_elements():
        mx, my = diagram.vertices[m]
        best = None
        for pts in segs:
            for a, b in zip(pts, pts[1:]):
                lo, hi = (a, b) if a[0] <= b[0] else (b, a)
                if not (lo[0] <= mx <= hi[0]) or lo[0] == hi[0]:
                    continue
                yy = lo[1] + (hi[1] - lo[1]) * (mx - lo[0]) / (hi[0] - lo[0])
                if yy < my and (best is None or yy > best):
                    best = yy
        for v, (vx, vy) in diagram.vertices.items():
            if vx == mx and vy < my and (best is None or vy > best):
                best = vy
        probe = (mx, (my + best) / 2 if best is not None else my - 1)
        enclosed = False
        for k, comp in enumerate(emb.components):
            if len(comp) < 2:
                continue
            polys = [emb.face_polygon(f) for f in set(emb.face_of[d] for d in emb.face_of if d[1] is not None and d[0] in comp) if f != emb.outer_faces[k]]
            if any(point_in_polygon(probe, poly) for poly in polys):
                enclosed = True
                break
        if enclosed:
            bad.append(m)
    return (not bad, bad)
