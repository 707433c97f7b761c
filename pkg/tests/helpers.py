"""Small hand-drawn diagrams and independent reference checks."""

from fractions import Fraction as F
from itertools import permutations

from afbposet.geometry import PlaneDiagram


def draw(vertices, edges):
    return PlaneDiagram(vertices, [(a, b) for a, b in edges])


def diamond():
    """z < l, r < t with l drawn left of r."""
    return draw(
        {"z": (0, 0), "l": (-1, 1), "r": (1, F(3, 2)), "t": (F(1, 10), 3)},
        [("z", "l"), ("z", "r"), ("l", "t"), ("r", "t")],
    )


def diamond_with_inner():
    """The diamond plus z < m with m drawn inside the 4-cycle."""
    return draw(
        {"z": (0, 0), "l": (-2, 1), "r": (2, F(3, 2)), "t": (F(1, 10), 4), "m": (F(1, 3), 2)},
        [("z", "l"), ("z", "r"), ("l", "t"), ("r", "t"), ("z", "m")],
    )


def vee():
    """Minimals a (left) and b (right) under c."""
    return draw({"a": (-1, 0), "b": (1, F(1, 2)), "c": (0, 2)}, [("a", "c"), ("b", "c")])


def fan():
    """Three minimals at x = -1, 0, 1 under one top."""
    return draw(
        {"p": (-1, 0), "q": (0, F(1, 10)), "s": (1, F(1, 5)), "t": (F(1, 7), 2)},
        [("p", "t"), ("q", "t"), ("s", "t")],
    )


def trapped_minimal():
    """b sits in the bounded face a-c-b-d, so its downward wedge is not exterior."""
    return draw(
        {"a": (0, 0), "b": (F(1, 10), 1), "c": (-1, 2), "d": (1, 3)},
        [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    )


def trapped_with_top():
    """The trap plus one element e above both c and d."""
    d = trapped_minimal()
    return draw(dict(d.vertices, e=(F(1, 3), 5)), [(x.lower, x.upper) for x in d.edges] + [("c", "e"), ("d", "e")])


def chains_side_by_side():
    return draw(
        {"a": (0, 0), "b": (F(1, 10), 1), "c": (2, F(1, 2)), "d": (F(21, 10), F(3, 2))},
        [("a", "b"), ("c", "d")],
    )


def hat():
    """z covered by a=(-1,1) and b=(1,2)."""
    return draw({"z": (0, 0), "a": (-1, 1), "b": (1, 2)}, [("z", "a"), ("z", "b")])


def roof():
    """t covering l=(-1,1) and r=(1,2)."""
    return draw({"t": (0, 3), "l": (-1, 1), "r": (1, 2)}, [("l", "t"), ("r", "t")])


def under_w():
    """Minimals a, b under w, and w < t."""
    return draw(
        {"a": (-1, 0), "b": (1, F(1, 2)), "w": (0, 2), "t": (F(1, 10), 3)},
        [("a", "w"), ("b", "w"), ("w", "t")],
    )


# -- brute-force references -----------------------------------------------


def brute_le(P):
    """Reflexive-transitive closure of the covers by repeated relaxation."""
    rel = {(x, x) for x in P.elements} | set(P.covers)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return rel


def brute_linear_extensions(P):
    rel = brute_le(P)
    for perm in permutations(P.elements):
        pos = {x: i for i, x in enumerate(perm)}
        if all(pos[a] <= pos[b] for a, b in rel):
            yield perm


def brute_dimension(P, max_k=4):
    exts = list(brute_linear_extensions(P))
    rel = brute_le(P)
    inc = [(x, y) for x in P.elements for y in P.elements if x != y and (x, y) not in rel and (y, x) not in rel]
    if not inc:
        return 1
    rev = [frozenset(p for p in inc if L.index(p[0]) > L.index(p[1])) for L in exts]
    need = frozenset(inc)
    from itertools import combinations

    for k in range(2, max_k + 1):
        for combo in combinations(rev, k):
            if frozenset().union(*combo) == need:
                return k
    return None


def brute_witness_paths(P, x, y):
    """Every cover chain from x up to y."""
    out = []

    def go(path):
        v = path[-1]
        if v == y:
            out.append(tuple(path))
            return
        for w in P.upper_covers(v):
            if P.le(w, y):
                go(path + [w])

    go([x])
    return out


def orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def brute_segments_cross(p1, p2, q1, q2):
    """Exact closed-segment intersection by the textbook case analysis."""

    def on(p, a, b):
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return (
        (d1 == 0 and on(p1, q1, q2))
        or (d2 == 0 and on(p2, q1, q2))
        or (d3 == 0 and on(q1, p1, p2))
        or (d4 == 0 and on(q2, p1, p2))
    )


def poset_strategy(max_n=7):
    """Hypothesis strategy for random posets on ids e0..e{n-1}."""
    from hypothesis import strategies as st

    from afbposet.poset import Poset

    @st.composite
    def build(draw_):
        n = draw_(st.integers(1, max_n))
        rel = set()
        for i in range(n):
            for j in range(i + 1, n):
                if draw_(st.booleans()):
                    rel.add((i, j))
        # closure, then reduction
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        covers = [(a, b) for a, b in rel if not any((a, c) in rel and (c, b) in rel for c in range(n))]
        return Poset([f"e{i}" for i in range(n)], [(f"e{a}", f"e{b}") for a, b in covers])

    return build()


# -- independent diagram validity oracle ------------------------------------


def _seg_intersection(p1, p2, q1, q2):
    """Exact intersection of two closed segments: None, a point, or a pair of points."""
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    den = rx * sy - ry * sx
    qp = (q1[0] - p1[0], q1[1] - p1[1])
    if den != 0:
        t = F(qp[0] * sy - qp[1] * sx) / den
        u = F(qp[0] * ry - qp[1] * rx) / den
        if 0 <= t <= 1 and 0 <= u <= 1:
            return (p1[0] + t * rx, p1[1] + t * ry)
        return None
    if qp[0] * ry - qp[1] * rx != 0:
        return None  # parallel, not collinear
    rr = rx * rx + ry * ry
    t0 = F(qp[0] * rx + qp[1] * ry) / rr
    t1 = t0 + F(sx * rx + sy * ry) / rr
    lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
    if lo > hi:
        return None
    a = (p1[0] + lo * rx, p1[1] + lo * ry)
    b = (p1[0] + hi * rx, p1[1] + hi * ry)
    return a if lo == hi else (a, b)


def brute_accepts(d):
    """Accept/reject decision for a drawing, by all-pairs exact intersection."""
    V = {v: (F(x), F(y)) for v, (x, y) in d.vertices.items()}
    xs = [p[0] for p in V.values()]
    ys = [p[1] for p in V.values()]
    if len(set(xs)) < len(xs) or len(set(ys)) < len(ys):
        return False
    keys = set()
    polys = []
    for e in d.edges:
        if e.lower not in V or e.upper not in V or e.lower == e.upper:
            return False
        k = frozenset((e.lower, e.upper))
        if k in keys:
            return False
        keys.add(k)
        pts = [V[e.lower]] + [(F(x), F(y)) for x, y in e.bends] + [V[e.upper]]
        if any(pts[i + 1][1] <= pts[i][1] for i in range(len(pts) - 1)):
            return False
        polys.append((e, pts))
    for e, pts in polys:
        for v, p in V.items():
            if v in (e.lower, e.upper):
                continue
            for i in range(len(pts) - 1):
                if orient(pts[i], pts[i + 1], p) == 0 and _seg_intersection(pts[i], pts[i + 1], p, p) is not None:
                    return False
    for i in range(len(polys)):
        e1, p1 = polys[i]
        for j in range(i + 1, len(polys)):
            e2, p2 = polys[j]
            shared = {e1.lower, e1.upper} & {e2.lower, e2.upper}
            allowed = {V[s] for s in shared}
            for a in range(len(p1) - 1):
                for b in range(len(p2) - 1):
                    hit = _seg_intersection(p1[a], p1[a + 1], p2[b], p2[b + 1])
                    if hit is None:
                        continue
                    if isinstance(hit[0], tuple) or hit not in allowed:
                        return False
    # Hasse: acyclic, and no edge implied by a longer path
    succ = {v: set() for v in V}
    for e, _ in polys:
        succ[e.lower].add(e.upper)

    def reach(a, b, skip):
        stack, seen = [a], {a}
        while stack:
            u = stack.pop()
            for w in succ[u]:
                if (u, w) == skip or w in seen:
                    continue
                if w == b:
                    return True
                seen.add(w)
                stack.append(w)
        return False

    for e, _ in polys:
        if reach(e.upper, e.lower, None) or reach(e.lower, e.upper, (e.lower, e.upper)):
            return False
    return True


def random_drawing(rng, max_segments=50):
    """A random, often invalid, drawing on a small grid."""
    n = rng.randint(2, 12)
    grid = rng.choice([6, 10, 40])
    verts = {}
    for i in range(n):
        verts[f"v{i}"] = (F(rng.randint(0, grid), rng.choice([1, 1, 2])), F(rng.randint(0, grid), rng.choice([1, 1, 3])))
    ids = sorted(verts)
    edges = []
    segments = 0
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.sample(ids, 2)
        if verts[a][1] > verts[b][1] or (verts[a][1] == verts[b][1] and rng.random() < 0.5):
            a, b = b, a
        bends = []
        if rng.random() < 0.3:
            (x0, y0), (x1, y1) = verts[a], verts[b]
            t = F(rng.randint(1, 3), 4)
            bends.append((x0 + (x1 - x0) * t + F(rng.randint(-2, 2), 2), y0 + (y1 - y0) * t))
        if segments + len(bends) + 1 > max_segments:
            break
        segments += len(bends) + 1
        edges.append((a, b, tuple(bends)))
    return PlaneDiagram(verts, edges)


def count_segments(d):
    return sum(len(e.bends) + 1 for e in d.edges)


def wraparound():
    """Minimals m1, m2, m3 in envelope order; m3's edge to y swings left under m1."""
    return PlaneDiagram(
        {"m1": (0, 0), "m2": (F(-1, 2), F(-1, 3)), "m3": (4, -1), "y": (1, 10), "w": (6, 3)},
        [
            ("m1", "y"),
            ("m3", "y", ((-1, F(-1, 2)), (F(-11, 10), 5))),
            ("m1", "w"),
            ("m2", "w"),
        ],
    )


DATA = __import__("pathlib").Path(__file__).parent / "data"


def load(name):
    return PlaneDiagram.from_json((DATA / name).read_text())
