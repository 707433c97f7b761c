"""Realizers for planar posets with a zero and for AFB posets."""

from __future__ import annotations

from dataclasses import dataclass, field

from .embedding import EmbeddedDiagram, INSIDE
from .errors import (
    AFBViolation,
    InternalIrreversible,
    IrreversibleSet,
    NoZero,
    NotALinearExtension,
    NotAZero,
    NotIncomparable,
    NotMinimal,
    VerificationFailed,
)
from .poset import AlternatingCycle, Realizer, incomparable_pairs, is_realizer, reverse_set

LABELS = ("1A", "1B", "1C", "2A", "2B", "2C", "2D", "2E")

FIVE = (
    ("1A+2A", ("1A", "2A"), None),
    ("1C+2E", ("1C", "2E"), None),
    ("2B+2D", ("2B", "2D"), None),
    ("1B+2C-notR", ("1B", "2C"), "right"),
    ("2C-notL", ("2C",), "left"),
)
SEVEN = (
    ("1A+2A", ("1A", "2A"), None),
    ("1C+2E", ("1C", "2E"), None),
    ("1B", ("1B",), None),
    ("2B", ("2B",), None),
    ("2D", ("2D",), None),
    ("2C-notR", ("2C",), "right"),
    ("2C-notL", ("2C",), "left"),
)


# -- the zero case ----------------------------------------------------------------


def dfs_extension(emb, z, preference="left"):
    """Depth-first linear extension of U_P[z] with a left or right preference."""
    if z not in emb.poset.index:
        raise NotAZero(f"{z!r} is not an element of the diagram")
    if preference not in ("left", "right"):
        raise ValueError("preference must be 'left' or 'right'")
    return emb.dfs_order(z, preference)


def inside_pairs(emb, z):
    """Pairs (x, y) of U_P[z] with x inside y."""
    P = emb.poset
    region = sorted(P.upset(z))
    out = set()
    for x in region:
        for y in region:
            if x != y and P.incomparable(x, y) and emb.classify_in_upset(z, x, y) == INSIDE:
                out.add((x, y))
    return out


def realize_planar_with_zero(emb):
    """Three extensions: left DFS, right DFS and a reversal of the Inside set."""
    P = emb.poset
    z = P.zero()
    if z is None:
        raise NoZero("the poset has no zero")
    l1 = dfs_extension(emb, z, "left")
    l2 = dfs_extension(emb, z, "right")
    inside = inside_pairs(emb, z)
    l3 = reverse_set(P, inside)
    if isinstance(l3, AlternatingCycle):
        raise InternalIrreversible("Inside", l3)
    R = Realizer((l1, l2, l3))
    _verify(P, R)
    return R


def _verify(P, R):
    try:
        ok = is_realizer(P, R)
    except NotALinearExtension as exc:
        raise VerificationFailed(str(exc)) from None
    if not ok:
        raise VerificationFailed("extensions do not realize the poset")


# -- minimal-element profiles --------------------------------------------------


@dataclass(frozen=True)
class MinProfile:
    y: str
    M_y: tuple
    lr_order: tuple
    s: str
    t: str
    a: str
    b: str
    kind: int
    j: int | None = None

    def to_dict(self):
        return {
            "y": self.y, "M_y": list(self.M_y), "lr_order": list(self.lr_order),
            "s": self.s, "t": self.t, "a": self.a, "b": self.b,
            "kind": f"Type{self.kind}", "j": self.j,
        }


@dataclass(frozen=True)
class PairLabel:
    pair: tuple
    label: str
    left_biased: bool = False
    right_biased: bool = False

    @property
    def biased(self):
        return {"left": self.left_biased, "right": self.right_biased}

    def to_dict(self):
        return {"pair": list(self.pair), "label": self.label, "biased": self.biased}


class MinPairAnalysis:
    """Profiles and labels for Min(P) x P, cached per diagram and envelope."""

    def __init__(self, emb, env=None):
        self.emb = emb
        self.env = env if env is not None else emb.envelope_order()
        self.L = self.env.position()
        self._profiles = {}
        self._labels = {}
        self._type2 = None

    def profile(self, y):
        hit = self._profiles.get(y)
        if hit is not None:
            return hit
        emb, L = self.emb, self.L
        P = emb.poset
        M = [m for m in P.downset(y) if P.is_minimal(m)]
        lr = tuple(emb.lr_order(y, M)) if len(M) > 1 else tuple(M)
        pos = [L[m] for m in lr]
        a = min(lr, key=L.get)
        b = max(lr, key=L.get)
        r = len(lr)
        if all(p < q for p, q in zip(pos, pos[1:])):
            prof = MinProfile(y, tuple(sorted(M, key=L.get)), lr, lr[0], lr[-1], a, b, 1)
        else:
            j0 = lr.index(a)
            rot = pos[j0:] + pos[:j0]
            if not all(p < q for p, q in zip(rot, rot[1:])):
                raise AFBViolation(f"minimal elements below {y} are not a rotation of the envelope order")
            prof = MinProfile(y, tuple(sorted(M, key=L.get)), lr, lr[0], lr[-1], a, b, 2, j0 + 1)
        assert r == len(M)
        self._profiles[y] = prof
        return prof

    def _type2_index(self):
        if self._type2 is None:
            groups = {}
            for y in self.emb.poset.elements:
                p = self.profile(y)
                if p.kind == 2:
                    z = self.emb.meet_z(y, p.a, p.b)
                    groups.setdefault((p.a, p.b, z), []).append(y)
            self._type2 = groups
        return self._type2

    def label(self, x, y):
        key = (x, y)
        hit = self._labels.get(key)
        if hit is not None:
            return hit
        emb, L = self.emb, self.L
        P = emb.poset
        if not P.is_minimal(x):
            raise NotMinimal(f"{x} is not minimal")
        if not P.incomparable(x, y):
            raise NotIncomparable(f"{x} and {y} are comparable")
        p = self.profile(y)
        v = L[x]
        la, lb, ls, lt = L[p.a], L[p.b], L[p.s], L[p.t]
        left = right = False
        if p.kind == 1:
            name = "1A" if v < la else ("1C" if v > lb else "1B")
        elif v < la:
            name = "2A"
        elif v > lb:
            name = "2E"
        elif v < lt:
            name = "2B"
        elif v > ls:
            name = "2D"
        else:
            name = "2C"
            z = emb.meet_z(y, p.a, p.b)
            for y2 in self._type2_index().get((p.a, p.b, z), ()):
                if not P.le(x, y2):
                    continue
                side = emb.left_right_in_downset(y2, x, p.b)
                left = left or side == "Left"
                side = emb.left_right_in_downset(y2, x, p.a)
                right = right or side == "Right"
        lab = PairLabel(key, name, left, right)
        self._labels[key] = lab
        return lab

    def min_pairs(self):
        P = self.emb.poset
        return sorted(
            (x, y) for x in P.minimal_elements() for y in P.elements if x != y and P.incomparable(x, y)
        )


def min_profile(emb, env, y):
    return MinPairAnalysis(emb, env).profile(y)


def classify_min_pair(emb, env, x, y):
    return MinPairAnalysis(emb, env).label(x, y)


@dataclass
class CoverFamily:
    mode: str
    sets: dict
    extensions: dict = field(default_factory=dict)

    def membership(self):
        out = {}
        for name, pairs in self.sets.items():
            for p in pairs:
                out.setdefault(p, []).append(name)
        return out

    def union(self):
        return set().union(*self.sets.values()) if self.sets else set()

    def to_dict(self):
        return {
            "mode": self.mode,
            "sets": {k: [list(p) for p in sorted(v)] for k, v in self.sets.items()},
        }


def cover_min_pairs(emb, env=None, mode="five", analysis=None, only=None):
    """Cover the incomparable Min(P) x P pairs by reversible sets.

    ``only`` optionally restricts the family to a subset of those pairs.
    """
    if mode not in ("five", "seven"):
        raise ValueError("mode must be 'five' or 'seven'")
    an = analysis or MinPairAnalysis(emb, env)
    pairs = an.min_pairs()
    if only is not None:
        pairs = [p for p in pairs if p in only]
    labels = [an.label(x, y) for x, y in pairs]
    P = emb.poset
    sets = {}
    exts = {}
    for name, kinds, exclude in (FIVE if mode == "five" else SEVEN):
        chosen = frozenset(
            lab.pair
            for lab in labels
            if lab.label in kinds
            and not (lab.label == "2C" and exclude == "right" and lab.right_biased)
            and not (lab.label == "2C" and exclude == "left" and lab.left_biased)
        )
        if not chosen:
            continue
        ext = reverse_set(P, chosen)
        if isinstance(ext, AlternatingCycle):
            raise IrreversibleSet(name, ext)
        sets[name] = chosen
        exts[name] = ext
    return CoverFamily(mode, sets, exts)


# -- the AFB pipeline ----------------------------------------------------------------


def _component_extensions(emb, mode, only=None):
    P = emb.poset
    out = []
    names = []
    if len(P) > 1:
        enclosed = emb.enclosed_pairs()
        if enclosed:
            ext = reverse_set(P, enclosed)
            if isinstance(ext, AlternatingCycle):
                raise InternalIrreversible("enclosed", ext)
            out.append(ext)
            names.append("enclosed")
        try:
            fam = cover_min_pairs(emb, mode=mode, only=only)
            exts = fam.extensions
        except IrreversibleSet:
            exts = _repaired_cover(emb, mode, only)
        for name, ext in exts.items():
            out.append(ext)
            names.append(name)
    if not out:
        out.append(P.topological_order())
        names.append("base")
    return out, names


def _repaired_cover(emb, mode, only=None):
    """Reversible sets covering the Min x P pairs when a named set is not.

    Pairs lying on alternating cycles are taken out of their named set
    and placed first-fit into any set that stays reversible; a new set
    is opened only when none does.
    """
    P = emb.poset
    an = MinPairAnalysis(emb)
    pairs = an.min_pairs()
    if only is not None:
        pairs = [p for p in pairs if p in only]
    labels = [an.label(x, y) for x, y in pairs]
    sets = {}
    for name, kinds, exclude in (FIVE if mode == "five" else SEVEN):
        sets[name] = {
            lab.pair
            for lab in labels
            if lab.label in kinds
            and not (lab.label == "2C" and exclude == "right" and lab.right_biased)
            and not (lab.label == "2C" and exclude == "left" and lab.left_biased)
        }
    evicted = []
    exts = {}
    for name, chosen in sets.items():
        while chosen:
            ext = reverse_set(P, chosen)
            if not isinstance(ext, AlternatingCycle):
                exts[name] = ext
                break
            victim = max(ext.pairs)
            chosen.discard(victim)
            evicted.append(victim)
    extra = 0
    for pair in sorted(evicted):
        for name in list(sets):
            trial = sets[name] | {pair}
            ext = reverse_set(P, trial)
            if not isinstance(ext, AlternatingCycle):
                sets[name] = trial
                exts[name] = ext
                break
        else:
            extra += 1
            name = f"extra{extra}"
            sets[name] = {pair}
            exts[name] = reverse_set(P, {pair})
    return {name: exts[name] for name in sets if sets[name]}


def combine_components(parts):
    """Merge realizers of the components into one realizer of the disjoint sum.

    Extension 0 lists the components in order and extension 1 in reverse
    order; beyond that the order of the components does not matter.
    """
    if len(parts) == 1:
        return [tuple(e) for e in parts[0]]
    k = max(2, max(len(p) for p in parts))
    padded = [list(p) + [p[-1]] * (k - len(p)) for p in parts]
    out = []
    for i in range(k):
        seq = range(len(padded)) if i != 1 else range(len(padded) - 1, -1, -1)
        ext = []
        for c in seq:
            ext.extend(padded[c][i])
        out.append(tuple(ext))
    return out


def realize_afb(emb, mode="five", reduce=True):
    """Realizer of an AFB poset with at most 6 (five) or 8 (seven) extensions.

    Returns ``(realizer, provenance)`` where provenance maps each
    incomparable pair (x, y) to the index of an extension with x > y.
    """
    from .reduction import reduce_to_min_covered

    emb.require_afb()
    P = emb.poset
    if reduce:
        big, proxy = reduce_to_min_covered(emb)
    else:
        big, proxy = emb, {}
    needed = _needed_min_pairs(P, big, proxy)
    parts = []
    for comp in big.poset.components():
        sub = EmbeddedDiagram(big.diagram.subdiagram(comp), check=False)
        exts, _ = _component_extensions(sub, mode, needed)
        parts.append(exts)
    keep = set(P.elements)
    exts = [tuple(v for v in e if v in keep) for e in combine_components(parts)]
    R = Realizer(tuple(exts))
    _verify(P, R)
    return R, provenance(P, R)


def _needed_min_pairs(P, big, proxy):
    """The Min(P') x P' pairs whose reversal the realizer of P relies on.

    Pairs of P that are enclosed in P' are handled by the enclosed-pairs
    extension; every other pair (x, y) is reversed through (x, y) itself
    when x is minimal in P', or through its proxy (m, y) otherwise.
    """
    Q = big.poset
    out = set()
    for x, y in incomparable_pairs(P):
        if Q.is_minimal(x):
            out.add((x, y))
        elif not big.is_enclosed(x, y):
            m = proxy.get((x, y))
            if m is not None and Q.is_minimal(m):
                out.add((m, y))
    return out


def provenance(P, R):
    pos = [{v: k for k, v in enumerate(e)} for e in R]
    out = {}
    for x, y in sorted(incomparable_pairs(P)):
        for k, p in enumerate(pos):
            if p[x] > p[y]:
                out[(x, y)] = k
                break
        else:
            raise VerificationFailed(f"no extension reverses ({x}, {y})")
    return out


def realizer_to_dict(R, prov=None):
    data = {"extensions": [list(e) for e in R]}
    if prov is not None:
        data["provenance"] = {f"({x},{y})": k for (x, y), k in sorted(prov.items())}
    return data


def realizer_from_dict(data):
    return Realizer(tuple(tuple(e) for e in data["extensions"]))
