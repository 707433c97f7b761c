"""Random diagram generators, small-poset enumeration and cross-checks."""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from pathlib import Path

from .embedding import EmbeddedDiagram
from .errors import AFBError, SearchBudgetExceeded
from .geometry import PlaneDiagram, on_segment, point_in_polygon, segments_intersect, validate
from .poset import Poset, dimension_exact, incomparable_pairs

SHAPES = ("stacked", "grid", "wraparound", "zero", "adversarial")


@dataclass(frozen=True)
class CorpusSpec:
    seed: int
    n: int
    shape: str = "stacked"

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if self.n < 1:
            raise ValueError("n must be at least 1")


# -- incremental straight-line drawing ----------------------------------------------


class _Builder:
    """Adds straight cover edges one at a time, refusing crossings and redundancy."""

    def __init__(self, pts):
        self.pts = dict(pts)
        self.ids = list(self.pts)
        self.bit = {v: 1 << k for k, v in enumerate(self.ids)}
        self.up = dict(self.bit)
        self.down = dict(self.bit)
        self.edges = []

    def _ids(self, mask):
        return [v for v in self.ids if mask & self.bit[v]]

    def can_add(self, u, v):
        if self.up[u] & self.bit[v] or self.up[v] & self.bit[u]:
            return False
        du, uv = self.down[u], self.up[v]
        for a, b in self.edges:
            if du & self.bit[a] and uv & self.bit[b]:
                return False
        p, q = self.pts[u], self.pts[v]
        for w, r in self.pts.items():
            if w != u and w != v and on_segment(r, p, q):
                return False
        for a, b in self.edges:
            if a in (u, v) or b in (u, v):
                continue
            if segments_intersect(p, q, self.pts[a], self.pts[b]):
                return False
        return True

    def add(self, u, v):
        self.edges.append((u, v))
        uv, du = self.up[v], self.down[u]
        for a in self._ids(du):
            self.up[a] |= uv
        for b in self._ids(uv):
            self.down[b] |= du

    def try_add(self, u, v):
        if self.can_add(u, v):
            self.add(u, v)
            return True
        return False

    def diagram(self):
        return PlaneDiagram(
            {str(v): p for v, p in self.pts.items()},
            [(str(a), str(b)) for a, b in self.edges],
        )


def _repair_afb(d, rng):
    """Delete edges until every minimal element is accessible from below."""
    edges = list(d.edges)
    while True:
        d = PlaneDiagram(d.vertices, edges)
        emb = EmbeddedDiagram(d, check=False)
        ok, bad = emb.afb_check()
        if ok:
            return d
        m = bad[0]
        f = emb.wedge[m]
        comp = emb.component_of[m]
        if f == emb.outer_faces[comp]:
            # m's whole component sits inside a bounded face of another one
            p = d.vertices[m]
            faces = [
                g for g, walk in enumerate(emb.faces)
                if walk and g not in emb.outer_faces and point_in_polygon(p, emb.face_polygon(g))
            ]
            f = faces[0]
        walk = emb.faces[f]
        outside = [dt for dt in walk if emb.face_of[(dt[1], dt[0])] in emb.exterior_faces]
        dt = rng.choice(outside or list(walk))
        key = set(dt)
        edges = [e for e in edges if {e.lower, e.upper} != key]


def _name_by_height(pts, first=None):
    order = sorted(pts, key=lambda v: pts[v][1])
    if first is not None:
        order.remove(first)
        order.insert(0, first)
    w = max(2, len(str(len(order) - 1)))
    return {v: f"v{k:0{w}d}" for k, v in enumerate(order)}


def _rename(d, names):
    return PlaneDiagram(
        {names[v]: p for v, p in d.vertices.items()},
        [(names[e.lower], names[e.upper], e.bends) for e in d.edges],
    )


def _scatter(rng, n, rows):
    """Distinct integer coordinates, arranged in ``rows`` horizontal bands."""
    xs = rng.sample(range(4 * n + 4), n)
    offs = rng.sample(range(n), n)
    row = [0] * n
    for k in range(n):
        row[k] = rng.randrange(rows) if k >= min(n, max(2, n // rows)) else 0
    return {k: (xs[k], row[k] * 3 * n + offs[k]) for k in range(n)}, row


def _attach_layers(rng, b, pts, row, p_attach, p_extra, roots=(), reach=2):
    order = sorted(pts, key=lambda v: pts[v][1])
    for v in order:
        if v in roots:
            continue
        cand = [w for w in order if pts[w][1] < pts[v][1] and row[v] - row[w] <= reach]
        cand.sort(key=lambda w: math.dist(pts[v], pts[w]))
        cand = cand[:6]
        attached = False
        for w in cand:
            if not attached:
                if rng.random() < p_attach and b.try_add(w, v):
                    attached = True
            elif rng.random() < p_extra:
                b.try_add(w, v)


def _stacked(rng, n):
    rows = max(1, round(math.sqrt(n)))
    pts, row = _scatter(rng, n, rows)
    b = _Builder(pts)
    _attach_layers(rng, b, pts, row, 0.9, 0.45)
    return b.diagram(), None


def _grid(rng, n):
    a = max(1, math.isqrt(n))
    c = -(-n // a)
    cells = [(i, j) for i in range(a) for j in range(c)]
    while len(cells) > n:
        cells.pop(rng.randrange(len(cells)))
    k = 4 * n + 4
    jx = rng.sample(range(n), n)
    jy = rng.sample(range(n), n)
    pts = {t: (k * (t[0] - t[1]) + jx[s], k * (t[0] + t[1]) + jy[s]) for s, t in enumerate(cells)}
    ids = {t: s for s, t in enumerate(cells)}
    b = _Builder({ids[t]: p for t, p in pts.items()})
    for (i, j) in cells:
        for t in ((i + 1, j), (i, j + 1)):
            if t in ids and rng.random() < 0.85:
                b.try_add(ids[(i, j)], ids[t])
    return b.diagram(), None


def _wraparound(rng, n):
    if n < 5:
        return _stacked(rng, n)
    rows = max(2, round(math.sqrt(n)))
    width = max(4, n // rows)
    pts, row = _scatter(rng, n, rows)
    bottom = sorted((v for v in pts if row[v] == 0), key=lambda v: pts[v][0])
    while len(bottom) < 4:
        v = next(v for v in pts if row[v] != 0)
        row[v] = 0
        pts[v] = (pts[v][0], pts[v][1] % (3 * n))
        bottom = sorted((v for v in pts if row[v] == 0), key=lambda v: pts[v][0])
    qi = rng.randrange(1, len(bottom) - 2) if len(bottom) > 3 else 1
    p, q, r = bottom[qi - 1], bottom[qi], bottom[qi + 1]
    # q becomes the lowest vertex, hence the first minimal in id order
    low = min(pts[v][1] for v in pts)
    pts[q] = (pts[q][0], low - 1)
    # a tent above q spanning its two bottom neighbours
    tent = next((v for v in sorted(pts, key=lambda v: pts[v][1]) if row[v] == 1), None)
    b = _Builder(pts)
    if tent is not None:
        pts[tent] = ((pts[p][0] + pts[r][0]) // 2 * 2 + 1, pts[tent][1])
        if any(pts[w][0] == pts[tent][0] for w in pts if w != tent):
            pts[tent] = (max(x for x, _ in pts.values()) + 1, pts[tent][1])
        b = _Builder(pts)
        b.try_add(p, tent)
        b.try_add(r, tent)
    _attach_layers(rng, b, pts, row, 0.95, 0.4, reach=max(2, width // 2))
    return b.diagram(), str(q)


def _zero(rng, n):
    if n == 1:
        return PlaneDiagram({"0": (0, 0)}, []), None
    rows = max(1, round(math.sqrt(n - 1)))
    pts, row = _scatter(rng, n - 1, rows)
    pts = {k + 1: (x, y + 1) for k, (x, y) in pts.items()}
    row = [0] + row
    xs = {x for x, _ in pts.values()}
    zx = (4 * n + 4) // 2
    while zx in xs:
        zx += 1
    pts[0] = (zx, -3 * n)
    row[0] = -1
    b = _Builder(pts)
    order = sorted(pts, key=lambda v: pts[v][1])
    for v in order[1:]:
        cand = sorted((w for w in order if pts[w][1] < pts[v][1]), key=lambda w: math.dist(pts[v], pts[w]))
        attached = False
        for w in cand:
            if not attached:
                attached = b.try_add(w, v)
            elif rng.random() < 0.3 and row[v] - row[w] <= 2:
                b.try_add(w, v)
        if not attached:
            # v cannot reach anything below it; start over with fresh positions
            return _zero(random.Random(rng.random()), n)
    return b.diagram(), None


def random_afb_diagram(spec):
    """Deterministic random AFB diagram with exactly ``spec.n`` vertices."""
    if spec.shape == "adversarial":
        return adversarial_non_afb(spec.seed)
    rng = random.Random(f"{spec.shape}:{spec.n}:{spec.seed}")
    build = {"stacked": _stacked, "grid": _grid, "wraparound": _wraparound, "zero": _zero}[spec.shape]
    d, first = build(rng, spec.n)
    d = _repair_afb(d, rng)
    d = _rename(d, _name_by_height(d.vertices, first))
    report = validate(d)
    if not report.ok:
        raise AssertionError(f"generator produced an invalid drawing: {report.kinds()}")
    return d


def random_zero_diagram(seed, n):
    return random_afb_diagram(CorpusSpec(seed, n, "zero"))


TRAPPED = {
    "vertices": {"a": (0, 0), "b": (1, 10), "c": (-10, 20), "d": (10, 30)},
    "edges": [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
}


def adversarial_non_afb(seed):
    """A valid drawing whose minimal element ``b`` is trapped in a bounded face.

    The core is a < c, a < d, b < c, b < d with b drawn inside the face
    a-c-b-d.  Random extra vertices are stacked above the core.
    """
    rng = random.Random(f"adversarial:{seed}")
    pts = dict(TRAPPED["vertices"])
    extra = rng.randrange(0, 7)
    xs = rng.sample([x for x in range(-30, 31) if x not in (0, 1, -10, 10)], extra)
    ys = rng.sample(range(40, 40 + 10 * extra + 1), extra)
    for k in range(extra):
        pts[f"e{k}"] = (xs[k], ys[k])
    b = _Builder(pts)
    for u, v in TRAPPED["edges"]:
        b.add(u, v)
    order = sorted(pts, key=lambda v: pts[v][1])
    for v in order:
        if not v.startswith("e"):
            continue
        cand = sorted((w for w in order if pts[w][1] < pts[v][1]), key=lambda w: math.dist(pts[v], pts[w]))
        for i, w in enumerate(cand[:4]):
            if i == 0 or rng.random() < 0.4:
                b.try_add(w, v)
    scale = rng.choice([1, 2, 3])
    den = rng.choice([1, 7, 10])
    shift = rng.randrange(-5, 6)
    d = b.diagram()
    d = PlaneDiagram(
        {v: (Fraction(x * scale, den) + shift, Fraction(y * scale, den)) for v, (x, y) in d.vertices.items()},
        d.edges,
    )
    return d


# -- cross-checks -----------------------------------------------------------------


def cross_check(d, oracle_limit=60, mode="five", replay_dir=None, budget=2_000_000):
    """Run every constructive realizer that applies and compare with the oracle."""
    from .realizers import realize_afb, realize_planar_with_zero

    emb = EmbeddedDiagram(d)
    P = emb.poset
    inc = len(incomparable_pairs(P))
    report = {
        "n": len(P), "inc": inc, "afb": None, "zero": P.zero() is not None,
        "afb_realizer": None, "zero_realizer": None, "dimension": None,
        "oracle": "skipped", "failures": [],
    }
    certs = {}
    fails = report["failures"]
    afb, violators = emb.afb_check()
    report["afb"] = afb
    report["violators"] = violators
    if afb:
        try:
            R, prov = realize_afb(emb, mode)
            report["afb_realizer"] = len(R)
            certs["afb_realizer"] = [list(e) for e in R]
            cap = 6 if mode == "five" else 8
            if len(R) > cap:
                fails.append(f"AFB realizer has {len(R)} > {cap} extensions")
        except AFBError as exc:
            fails.append(f"realize_afb: {type(exc).__name__}: {exc}")
    if report["zero"]:
        try:
            R3 = realize_planar_with_zero(emb)
            report["zero_realizer"] = len(R3)
            certs["zero_realizer"] = [list(e) for e in R3]
        except AFBError as exc:
            fails.append(f"realize_planar_with_zero: {type(exc).__name__}: {exc}")
    if inc <= oracle_limit:
        try:
            dim = dimension_exact(P, max_k=7, max_inc=oracle_limit, budget=budget)
            report["oracle"] = "exact" if dim is not None else "above-7"
            report["dimension"] = dim
        except SearchBudgetExceeded:
            report["oracle"] = "budget"
            dim = None
        if dim is None and report["oracle"] == "above-7":
            fails.append("dimension exceeds 7")
        if dim is not None:
            if report["afb_realizer"] is not None and dim > report["afb_realizer"]:
                fails.append(f"dimension {dim} > AFB realizer size {report['afb_realizer']}")
            if report["zero"] and dim > 3:
                fails.append(f"dimension {dim} > 3 for a poset with a zero")
    report["ok"] = not fails
    if fails and replay_dir is not None:
        report["replay"] = str(write_replay(d, {**certs, "report": report}, replay_dir))
    return report


def write_replay(d, certificates, directory):
    data = d.to_dict()
    data["certificates"] = certificates
    text = json.dumps(data, indent=1, sort_keys=True, default=str)
    path = Path(directory) / f"replay-{hashlib.sha1(d.to_json().encode()).hexdigest()[:12]}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


# -- exhaustive small posets ------------------------------------------------------------


def enumerate_posets(n):
    """All posets on ``n`` elements up to isomorphism, as Poset objects."""
    rels = [[]]
    for k in range(n):
        grown = []
        for P in rels:
            for m in range(1 << k):
                if all((P[i] & ~m) == 0 for i in range(k) if m >> i & 1):
                    grown.append(P + [m])
        rels = grown
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for P in rels:
        rel = [(i, j) for j in range(n) for i in range(n) if P[j] >> i & 1]
        canon = min(tuple(sorted((p[i], p[j]) for i, j in rel)) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        out.append(_poset_from_relation(n, canon))
    return out


def _poset_from_relation(n, rel):
    rel = set(rel)
    covers = [
        (i, j) for i, j in rel
        if not any((i, k) in rel and (k, j) in rel for k in range(n))
    ]
    return Poset([str(i) for i in range(n)], [(str(i), str(j)) for i, j in covers])


def automorphisms(P):
    els = P.elements
    out = []
    for p in permutations(range(len(els))):
        g = {els[k]: els[p[k]] for k in range(len(els))}
        if all((g[a], g[b]) in P.covers for a, b in P.covers):
            out.append(g)
    return out


def orbit_subsets(P, max_size):
    """One representative subset of Inc(P) of each size <= max_size per automorphism orbit.

    Subsets are grown in increasing index order and kept only when they are
    the lexicographically least image of themselves, so each orbit is met
    exactly once.
    """
    pairs = sorted(incomparable_pairs(P))
    ix = {p: k for k, p in enumerate(pairs)}
    ident = tuple(range(len(pairs)))
    G = [tuple(ix[(g[a], g[b])] for a, b in pairs) for g in automorphisms(P)]
    G = [tuple(1 << i for i in g) for g in G if g != ident]
    # a subset is a bitmask; it is canonical when no image under G has its
    # lowest differing bit set, i.e. when it is lexicographically least
    out = [()]
    frontier = [((), 0, tuple(0 for _ in G))]
    for _ in range(max_size):
        nxt = []
        for T, mask, images in frontier:
            for p in range(T[-1] + 1 if T else 0, len(pairs)):
                bit = 1 << p
                S_mask = mask | bit
                new_images = tuple(img | g[p] for img, g in zip(images, G))
                for img in new_images:
                    diff = img ^ S_mask
                    if diff & -diff & img:
                        break
                else:
                    nxt.append((T + (p,), S_mask, new_images))
        out.extend(T for T, _, _ in nxt)
        frontier = nxt
    return [tuple(pairs[i] for i in S) for S in out]
