"""Reduction to the case where every relevant pair has a minimal proxy.

For an incomparable, non-enclosed pair (x, y) with x not minimal we want a
minimal element x'' <= x with x'' || y.  When none exists, a fresh minimal
element is grafted into the drawing: a new chain leaves x' (the lowest
element below x that is incomparable to y), hugs the chain of extreme lower
covers below x' on the side away from y, and ends just below the minimal
element at the bottom of that chain, in the exterior region.  Up-edges it
has to pass are subdivided by new vertices, which keeps every new edge a
cover and adds no comparabilities among the old elements.
"""

from __future__ import annotations

from fractions import Fraction

from .embedding import EmbeddedDiagram
from .errors import AFBViolation, NotAFB
from .geometry import Edge, PlaneDiagram, validate

MAX_TRIES = 40
MAX_ROUNDS = 8


def _lift(p, d, height):
    t = Fraction(height) / abs(d[1])
    return (p[0] + t * d[0], p[1] + t * d[1])


def _shift(p, dx):
    return (p[0] + dx, p[1])


def _direction(pts):
    return (pts[1][0] - pts[0][0], pts[1][1] - pts[0][1])


def _fresh_ids(taken):
    k = 0
    while True:
        k += 1
        name = f"~{k}"
        if name not in taken:
            yield name


def _base_scales(emb, chain):
    """Initial vertical and horizontal offsets for the hugging path."""
    poly = emb._poly
    dys = []
    gaps = []
    for c in chain:
        for w in emb.rotation[c]:
            pts = poly[(c, w)]
            dys.append(abs(pts[1][1] - pts[0][1]))
        keys = [Fraction(pts[1][0] - pts[0][0]) / (pts[1][1] - pts[0][1])
                for pts in (poly[(c, w)] for w in emb.up[c])]
        gaps.extend(b - a for a, b in zip(keys, keys[1:]))
    height = min(dys) / 3
    kappa = min([Fraction(1)] + gaps) / 4
    return height, height * kappa


def _graft_right(emb, xp, u, names, height, delta, tweak=0):
    """Graft a new minimal below ``xp`` hugging the right side of its chain.

    Returns ``(diagram, new_minimal)`` or raises ValueError if the chosen
    offsets do not give a valid drawing.
    """
    d = emb.diagram
    poly = emb._poly
    chain = [u]
    while emb.down[chain[-1]]:
        chain.append(emb.down[chain[-1]][-1])

    path = [xp]          # vertex ids along the new chain, top to bottom
    legs = [[]]          # bend points between consecutive path vertices
    new_vertices = {}
    split = {}           # (c, q) -> new vertex on that edge
    last = {}            # c -> the lowest new vertex placed on an up-edge of c
    prev = xp
    for i, c in enumerate(chain):
        inc = poly[(c, prev)]
        for p in reversed(inc[1:-1]):
            legs[-1].append(_shift(p, delta))
        legs[-1].append(_shift(_lift(inc[0], _direction(inc), height), delta))
        ups = emb.up[c]
        crossed = ups[ups.index(prev) + 1:]
        s = len(crossed)
        last[c] = None
        for j, q in enumerate(crossed, start=1):
            # decreasing heights below ``height``; ``tweak`` in [0, 1) breaks
            # accidental coincidences of coordinates
            h = height * (s + 1 - j + tweak * j / (s + 2)) / (s + 1)
            r = _lift(d.vertices[c], _direction(poly[(c, q)]), h)
            name = next(names)
            new_vertices[name] = r
            split[(c, q)] = name
            last[c] = name
            path.append(name)
            legs.append([])
        legs[-1].append(_shift(d.vertices[c], delta))
        if i + 1 < len(chain):
            out = poly[(c, chain[i + 1])]
            legs[-1].append(_shift(_lift(out[0], _direction(out), height), delta))
        prev = c
    cx, cy = d.vertices[chain[-1]]
    bottom = next(names)
    new_vertices[bottom] = (cx + delta, cy - height)
    path.append(bottom)

    # The path gives c < r_s < ... < r_1 for the vertices placed on up-edges
    # of c, so only c < r_s is kept as an edge.  For the same reason the old
    # cover u < xp is dropped if anything was placed at u.  None of this
    # changes the order.
    drop = (u, xp) if last.get(u) else None
    edges = []
    for e in d.edges:
        key = (e.lower, e.upper)
        if key == drop:
            continue
        if key in split:
            r = split[key]
            if last[e.lower] == r:
                edges.append(Edge(e.lower, r, ()))
            edges.append(Edge(r, e.upper, e.bends))
        else:
            edges.append(e)
    for k in range(len(path) - 1):
        edges.append(Edge(path[k + 1], path[k], tuple(reversed(legs[k]))))
    verts = dict(d.vertices)
    verts.update(new_vertices)
    out = PlaneDiagram(verts, edges)
    report = validate(out, fresh=set(new_vertices) | {xp})
    if not report.ok:
        raise ValueError(report.violations)
    return out, bottom


def graft_minimal(emb, xp, u, side, taken):
    """Graft a fresh minimal below ``xp`` (whose unique lower cover is ``u``).

    ``side`` is "right" or "left"; the left graft is the right graft of
    the mirrored drawing.
    """
    work = emb if side == "right" else emb.mirrored()
    chain = [u]
    while work.down[chain[-1]]:
        chain.append(work.down[chain[-1]][-1])
    height, delta = _base_scales(work, chain)
    # a per-graft salt keeps new coordinates off those of earlier grafts
    salt = 1 + Fraction(1, len(taken) + 7)
    height, delta = height / salt, delta / salt ** 2
    for attempt in range(MAX_TRIES):
        names = _fresh_ids(taken)
        tweak = Fraction(attempt * 5 % 11, 13)
        try:
            out, bottom = _graft_right(work, xp, u, names, height, delta, tweak)
        except ValueError:
            height /= 3
            delta /= Fraction(31, 10)
            continue
        if side == "left":
            out = out.mirrored()
        return out, bottom
    raise AFBViolation(f"could not graft a minimal element below {xp}")


def _exterior_sector(emb, v):
    """A downward direction at ``v`` lying in an exterior face, or None."""
    rot = emb.rotation[v]
    poly = emb._poly
    if not rot:
        return (Fraction(0), Fraction(-1))
    ups = set(emb.up[v])
    for k, a in enumerate(rot):
        b = rot[(k + 1) % len(rot)]
        if emb.face_of[(v, a)] not in emb.exterior_faces:
            continue
        da, db = _direction(poly[(v, a)]), _direction(poly[(v, b)])
        if a not in ups and b not in ups:
            if a == b or (not ups and a == emb.down[v][-1]):
                # a lone edge, or the wrap-around sector of a maximal vertex
                return (da[0] / abs(da[1]) + 1, Fraction(-1))
            return (da[0] / abs(da[1]) + db[0] / abs(db[1]), Fraction(-2))
        if a in ups and b not in ups:
            # from the left-most up-edge round to the left-most down-edge
            return (db[0] / abs(db[1]) - 1, Fraction(-1))
        if a not in ups and b in ups:
            return (da[0] / abs(da[1]) + 1, Fraction(-1))
        if a == b or not emb.down[v] and a == emb.up[v][0]:
            # the wrap-around sector of a vertex with no lower covers
            return (Fraction(0), Fraction(-1))
    return None


def graft_pendant(emb, v, direction, taken):
    """Hang a fresh minimal element directly below ``v`` along ``direction``."""
    d = emb.diagram
    name = next(_fresh_ids(taken))
    height = _base_scales(emb, [v])[0] / (1 + Fraction(1, len(taken) + 7))
    for _ in range(MAX_TRIES):
        p = _lift(d.vertices[v], direction, height)
        verts = dict(d.vertices)
        verts[name] = p
        out = PlaneDiagram(verts, list(d.edges) + [Edge(name, v, ())])
        if validate(out, fresh={name, v}).ok:
            return out, name
        height /= 3
    raise AFBViolation(f"could not hang a minimal element below {v}")


def _lowest_incomparable_below(emb, x, y):
    P = emb.poset
    cand = [v for v in P.downset(x) if P.incomparable(v, y)]
    return min(cand, key=lambda v: emb.y_key[v])


def _minimal_proxy(emb, x, y):
    P = emb.poset
    cand = [m for m in P.downset(x) if P.is_minimal(m) and P.incomparable(m, y)]
    return min(cand, key=lambda v: (emb.y_key[v], v)) if cand else None


def _enclosed_proxy(emb, x, y):
    P = emb.poset
    for v in sorted(P.downset(x), key=lambda v: emb.y_key[v]):
        if P.incomparable(v, y) and emb.is_enclosed(v, y):
            return v
    return None


def reduction_targets(emb):
    """Incomparable pairs that are not enclosed and whose first entry is not minimal."""
    P = emb.poset
    out = []
    for x in P.elements:
        if P.is_minimal(x):
            continue
        for y in P.elements:
            if x != y and P.incomparable(x, y) and not emb.is_enclosed(x, y):
                out.append((x, y))
    return out


def _graft_attempts(emb, xp, y):
    """Candidate surgeries for x', most natural first."""
    P = emb.poset
    lower = P.lower_covers(xp)
    taken = set(emb.diagram.vertices)
    ups_of = emb.up
    if len(lower) == 1:
        (u,) = lower
        k = ups_of[u].index(xp)
        toward = [i for i, v in enumerate(ups_of[u]) if P.le(v, y)]
        first = "left" if any(i > k for i in toward) else "right"
        other = "right" if first == "left" else "left"
        for side in (first, other):
            yield lambda side=side: graft_minimal(emb, xp, u, side, taken)
        return
    # several lower covers, all below y: hang x'' directly under x' in an
    # exterior sector, or hug a lower cover on either side (the inner sides
    # matter when every sector at x' is bounded)
    sector = _exterior_sector(emb, xp)
    if sector is not None:
        yield lambda: graft_pendant(emb, xp, sector, taken)
    down = emb.down[xp]
    yield lambda: graft_minimal(emb, xp, down[0], "left", taken)
    yield lambda: graft_minimal(emb, xp, down[-1], "right", taken)
    for u in down:
        for side in ("right", "left"):
            if (u, side) not in ((down[0], "left"), (down[-1], "right")):
                yield lambda u=u, side=side: graft_minimal(emb, xp, u, side, taken)


def _graft_for_pair(emb, x, xp, y):
    """Graft a minimal x'' <= x with x'' || y, keeping the drawing AFB."""
    for attempt in _graft_attempts(emb, xp, y):
        try:
            d2, bottom = attempt()
        except AFBViolation:
            continue
        nxt = EmbeddedDiagram(d2, check=False, base=emb)
        Q = nxt.poset
        if nxt.afb_check()[0] and Q.le(bottom, x) and Q.incomparable(bottom, y):
            return nxt, bottom
    raise AFBViolation(f"no graft below {xp} works for the pair ({x}, {y})")


def reduce_to_min_covered(emb):
    """Return ``(emb2, proxy)``.

    ``emb2`` is an AFB drawing of a poset containing P as an induced
    subposet.  ``proxy`` maps each reduction target (x, y) of P to an
    element v <= x of the new poset with v || y that is either minimal, or
    forms an enclosed pair (v, y).  Either way reversing the pair at v also
    reverses (x, y).
    """
    ok, bad = emb.afb_check()
    if not ok:
        raise NotAFB(bad)
    P0 = emb.poset
    targets = reduction_targets(emb)
    current = emb
    grafted = {}
    # a pair with a minimal proxy keeps it through later grafts (they only
    # subdivide edges and hang new elements), so it is not looked at again;
    # the final pass below re-checks every proxy anyway
    settled = set()
    for _ in range(MAX_ROUNDS):
        pending = False
        for x, y in targets:
            if (x, y) in settled:
                continue
            if _minimal_proxy(current, x, y) is not None:
                settled.add((x, y))
                continue
            xp = _lowest_incomparable_below(current, x, y)
            # an enclosed (x, y) or (x', y) needs no graft, but grafting works
            # just as well and is cheaper to try first than the enclosure test
            try:
                nxt, bottom = _graft_for_pair(current, x, xp, y)
            except AFBViolation:
                if current.is_enclosed(x, y) or current.is_enclosed(xp, y):
                    continue
                raise
            current = nxt
            grafted[(x, y)] = bottom
            settled.add((x, y))
            pending = True
        if not pending:
            break

    P1 = current.poset
    for a in P0.elements:
        for b in P0.elements:
            if P0.le(a, b) != P1.le(a, b):
                raise AFBViolation(f"reduction changed the relation between {a} and {b}")
    proxy = {}
    for x, y in targets:
        m = grafted.get((x, y))
        if m is None or not (P1.le(m, x) and P1.incomparable(m, y)):
            m = _minimal_proxy(current, x, y)
        if m is None:
            m = _enclosed_proxy(current, x, y)
        if m is None:
            raise AFBViolation(f"no proxy for ({x}, {y}) after reduction")
        proxy[(x, y)] = m
    return current, proxy
