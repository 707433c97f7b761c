"""Finite posets, linear extensions, reversible sets and dimension.

Elements are opaque string ids.  Every ordering used to break ties is the
lexicographic order on ids, so all results are deterministic.

Internally the order is stored as bitmasks over the sorted element list
(bit ``i`` stands for ``elements[i]``).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    CycleInCovers,
    NotALinearExtension,
    NotConnected,
    NotMinimal,
    PairNotIncomparable,
    PosetError,
    RedundantCover,
    SearchBudgetExceeded,
    UnknownElement,
)


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """An immutable finite poset given by its cover relation.

    ``covers`` must be acyclic and transitively reduced; violations raise
    :class:`CycleInCovers` / :class:`RedundantCover`.
    """

    __slots__ = ("elements", "index", "covers", "_up", "_down", "_ucov", "_lcov", "_ucmask", "_lcmask",
                 "_hash", "_unames", "_lnames", "_sets")

    def __init__(self, elements, covers=()):
        elems = sorted(set(elements))
        covers = list(covers)
        self.elements = tuple(elems)
        self.index = {x: i for i, x in enumerate(self.elements)}
        cov = set()
        for a, b in covers:
            if a not in self.index or b not in self.index:
                raise UnknownElement(f"cover ({a}, {b}) references an undeclared element")
            if a == b:
                raise CycleInCovers([a, a])
            cov.add((a, b))
        self.covers = frozenset(cov)
        n = len(self.elements)
        ucov = [[] for _ in range(n)]
        lcov = [[] for _ in range(n)]
        for a, b in sorted(cov):
            ucov[self.index[a]].append(self.index[b])
            lcov[self.index[b]].append(self.index[a])
        self._ucov = tuple(tuple(sorted(u)) for u in ucov)
        self._lcov = tuple(tuple(sorted(l)) for l in lcov)
        self._hash = None
        E = self.elements
        self._unames = tuple(tuple(E[j] for j in u) for u in self._ucov)
        self._lnames = tuple(tuple(E[j] for j in l) for l in self._lcov)
        self._sets = {}

        order = self._toposort_indices()
        up = [0] * n
        for i in reversed(order):
            m = 1 << i
            for j in self._ucov[i]:
                m |= up[j]
            up[i] = m
        down = [0] * n
        for i in order:
            m = 1 << i
            for j in self._lcov[i]:
                m |= down[j]
            down[i] = m
        self._ucmask = tuple(sum(1 << j for j in u) for u in self._ucov)
        self._lcmask = tuple(sum(1 << j for j in l) for l in self._lcov)
        self._up = tuple(up)
        self._down = tuple(down)
        for i in range(n):
            uc = self._ucov[i]
            for j in uc:
                for k in uc:
                    if k != j and (up[k] >> j) & 1:
                        raise RedundantCover(self.elements[i], self.elements[j])

    def _toposort_indices(self):
        n = len(self.elements)
        indeg = [len(self._lcov[i]) for i in range(n)]
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)
            out.append(i)
            for j in self._ucov[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        if len(out) < n:
            left = {i for i in range(n) if indeg[i] > 0}
            start = min(left)
            seen = {}
            path = []
            v = start
            while v not in seen:
                seen[v] = len(path)
                path.append(v)
                v = next(p for p in self._lcov[v] if p in left)
            cyc = path[seen[v]:][::-1]
            raise CycleInCovers([self.elements[i] for i in cyc + [cyc[0]]])
        return out

    # -- basic queries -------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return isinstance(other, Poset) and self.elements == other.elements and self.covers == other.covers

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.elements, self.covers))
        return self._hash

    def __repr__(self):
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def _i(self, x):
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}") from None

    def le(self, x, y):
        index = self.index
        try:
            return bool((self._up[index[x]] >> index[y]) & 1)
        except KeyError:
            raise UnknownElement(f"unknown element {x!r} or {y!r}") from None

    def lt(self, x, y):
        return x != y and self.le(x, y)

    def comparable(self, x, y):
        index = self.index
        try:
            i, j = index[x], index[y]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r} or {y!r}") from None
        return bool((self._up[i] >> j) & 1 or (self._up[j] >> i) & 1)

    def incomparable(self, x, y):
        return not self.comparable(x, y)

    @property
    def leq(self):
        """The order relation as a set of pairs, reflexive pairs included."""
        E = self.elements
        return {(E[i], E[j]) for i in range(len(E)) for j in _bits(self._up[i])}

    def upper_covers(self, x):
        return self._unames[self._i(x)]

    def lower_covers(self, x):
        return self._lnames[self._i(x)]

    def upset(self, z):
        """U_P[z]: all x with z <= x."""
        key = ("u", z)
        hit = self._sets.get(key)
        if hit is None:
            hit = self._sets[key] = frozenset(self.elements[j] for j in _bits(self._up[self._i(z)]))
        return hit

    def downset(self, z):
        """D_P[z]: all x with x <= z."""
        key = ("d", z)
        hit = self._sets.get(key)
        if hit is None:
            hit = self._sets[key] = frozenset(self.elements[j] for j in _bits(self._down[self._i(z)]))
        return hit

    def minimal_elements(self):
        return tuple(x for i, x in enumerate(self.elements) if not self._lcov[i])

    def maximal_elements(self):
        return tuple(x for i, x in enumerate(self.elements) if not self._ucov[i])

    def is_minimal(self, x):
        return not self._lcov[self._i(x)]

    def zero(self):
        mins = self.minimal_elements()
        return mins[0] if len(mins) == 1 else None

    def is_chain(self):
        n = len(self.elements)
        return all(self._up[i] | self._down[i] == (1 << n) - 1 for i in range(n))

    def topological_order(self):
        return tuple(self.elements[i] for i in self._toposort_indices())

    def components(self):
        """Connected components of the cover graph, as sorted tuples."""
        seen = set()
        comps = []
        for x in self.elements:
            if x in seen:
                continue
            stack = [x]
            comp = set()
            while stack:
                v = stack.pop()
                if v in comp:
                    continue
                comp.add(v)
                stack.extend(self.upper_covers(v))
                stack.extend(self.lower_covers(v))
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self):
        return len(self.components()) <= 1

    def subposet(self, elements):
        """The induced subposet on ``elements`` (covers recomputed)."""
        keep = sorted(set(elements))
        for x in keep:
            self._i(x)
        mask = 0
        for x in keep:
            mask |= 1 << self.index[x]
        covers = []
        for x in keep:
            i = self.index[x]
            above = (self._up[i] & mask) & ~(1 << i)
            for j in _bits(above):
                between = above & self._down[j] & ~(1 << j)
                if not between:
                    covers.append((x, self.elements[j]))
        return Poset(keep, covers)

    def to_dict(self):
        return {"elements": list(self.elements), "covers": [list(c) for c in sorted(self.covers)]}

    @classmethod
    def from_dict(cls, data):
        try:
            elements = [str(x) for x in data["elements"]]
            covers = [(str(a), str(b)) for a, b in data.get("covers", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise PosetError(f"malformed poset JSON: {exc}") from None
        return cls(elements, covers)


def closure_from_covers(covers, elements=None):
    """Build a :class:`Poset` from cover pairs.

    ``elements`` defaults to the ids mentioned in ``covers``.

    >>> sorted(closure_from_covers({("a", "b"), ("b", "c")}).leq)[:3]
    [('a', 'a'), ('a', 'b'), ('a', 'c')]
    """
    covers = list(covers)
    if elements is None:
        elements = {x for c in covers for x in c}
    return Poset(elements, covers)


def dual(P):
    return Poset(P.elements, [(b, a) for a, b in P.covers])


def incomparable_pairs(P):
    """Inc(P): every ordered pair (x, y) with x and y incomparable."""
    E = P.elements
    n = len(E)
    out = set()
    for i in range(n):
        rest = ((1 << n) - 1) & ~(P._up[i] | P._down[i])
        for j in _bits(rest):
            out.add((E[i], E[j]))
    return out


def critical_pairs(P):
    """Incomparable (x, y) with D(x)-{x} inside D(y) and U(y)-{y} inside U(x)."""
    out = set()
    for x, y in incomparable_pairs(P):
        i, j = P.index[x], P.index[y]
        below_x = P._down[i] & ~(1 << i)
        above_y = P._up[j] & ~(1 << j)
        if below_x & ~P._down[j] == 0 and above_y & ~P._up[i] == 0:
            out.add((x, y))
    return out


# -- linear extensions and realizers ----------------------------------


def is_linear_extension(P, order):
    order = tuple(order)
    if len(order) != len(P) or set(order) != set(P.elements):
        return False
    pos = {x: k for k, x in enumerate(order)}
    return all(pos[a] < pos[b] for a, b in P.covers)


@dataclass(frozen=True)
class Realizer:
    extensions: tuple

    def __post_init__(self):
        object.__setattr__(self, "extensions", tuple(tuple(e) for e in self.extensions))
        if not self.extensions:
            raise PosetError("a realizer needs at least one linear extension")

    def __len__(self):
        return len(self.extensions)

    def __iter__(self):
        return iter(self.extensions)


@dataclass(frozen=True)
class AlternatingCycle:
    """Cyclic sequence of incomparable pairs with x_i <= y_{i+1}."""

    pairs: tuple
    strict: bool = False

    def __len__(self):
        return len(self.pairs)


def is_alternating_cycle(P, pairs):
    k = len(pairs)
    if k < 2:
        return False
    for i, (x, y) in enumerate(pairs):
        if P.comparable(x, y):
            return False
        if not P.le(x, pairs[(i + 1) % k][1]):
            return False
    return True


def is_strict_alternating_cycle(P, pairs):
    if not is_alternating_cycle(P, pairs):
        return False
    k = len(pairs)
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    for i in range(k):
        for j in range(k):
            if P.le(xs[i], ys[j]) != (j == (i + 1) % k):
                return False
    for group in (xs, ys):
        if len(set(group)) != k:
            return False
        if any(P.comparable(a, b) for a, b in combinations(group, 2)):
            return False
    return True


def _check_pairs(P, S):
    for pair in S:
        x, y = pair
        if x not in P or y not in P or P.comparable(x, y):
            raise PairNotIncomparable(pair)


def _strictify(P, pairs):
    """Shortcut chords x_i <= y_j (j != i+1) until none remain."""
    pairs = list(pairs)
    changed = True
    while changed:
        changed = False
        k = len(pairs)
        for i in range(k):
            xi = pairs[i][0]
            for j in range(k):
                if j == i or j == (i + 1) % k:
                    continue
                if P.le(xi, pairs[j][1]):
                    # keep p_j, p_{j+1}, ..., p_i
                    if j <= i:
                        pairs = pairs[j:i + 1]
                    else:
                        pairs = pairs[j:] + pairs[:i + 1]
                    changed = True
                    break
            if changed:
                break
    return pairs


_SMALL = 16


def _reverse_small(P, S):
    """Bitmask version of the topological sort for small posets.

    Places the smallest-index ready element at each step, exactly as the
    general routine does.  Returns None when there is a cycle.
    """
    idx, up, down = P.index, P._up, P._down
    need = [down[i] & ~(1 << i) for i in range(len(up))]
    for pair in S:
        x, y = pair
        i, j = idx.get(x), idx.get(y)
        if i is None or j is None or (up[i] >> j) & 1 or (up[j] >> i) & 1:
            raise PairNotIncomparable(pair)
        need[i] |= 1 << j
    n = len(need)
    placed = 0
    out = []
    E = P.elements
    for _ in range(n):
        for i in range(n):
            if not (placed >> i) & 1 and not need[i] & ~placed:
                break
        else:
            return _small_cycle(P, S, need, placed)
        placed |= 1 << i
        out.append(E[i])
    return tuple(out)


def _small_cycle(P, S, need, placed):
    """A strict alternating cycle among the unplaceable elements."""
    n = len(need)
    left = ((1 << n) - 1) & ~placed
    seen = {}
    path = []
    v = (left & -left).bit_length() - 1
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        nb = need[v] & left
        v = (nb & -nb).bit_length() - 1
    cyc = path[seen[v]:][::-1]  # forward order: cyc[t] must precede cyc[t+1]
    idx = P.index
    rev = {(idx[y], idx[x]): (x, y) for x, y in S}
    m = len(cyc)
    start = next(t for t in range(m) if (cyc[t], cyc[(t + 1) % m]) in rev)
    cyc = cyc[start:] + cyc[:start]
    pairs = [rev[e] for e in ((cyc[t], cyc[(t + 1) % m]) for t in range(m)) if e in rev]
    return AlternatingCycle(tuple(_strictify(P, pairs)), strict=True)


def reverse_set(P, S):
    """Find a linear extension putting x above y for every (x, y) in ``S``.

    Returns the extension as a tuple of ids, or a strict
    :class:`AlternatingCycle` inside ``S`` when no such extension exists.
    """
    S = sorted(set(S))
    idx = P.index
    n = len(P.elements)
    if n <= _SMALL:
        return _reverse_small(P, S)
    _check_pairs(P, S)
    succ = [list(P._ucov[i]) for i in range(n)]
    pred = [list(P._lcov[i]) for i in range(n)]
    # (x, y) reversed means y must come before x
    rev_pred = {}
    for x, y in S:
        i, j = idx[x], idx[y]
        succ[j].append(i)
        pred[i].append(j)
        rev_pred.setdefault((j, i), (x, y))
    indeg = [len(p) for p in pred]
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        i = heapq.heappop(heap)
        out.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(out) == n:
        return tuple(P.elements[i] for i in out)

    left = {i for i in range(n) if indeg[i] > 0}
    seen = {}
    path = []
    v = min(left)
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        v = next(p for p in pred[v] if p in left)
    cyc = path[seen[v]:][::-1]  # forward order: cyc[t] -> cyc[t+1]
    m = len(cyc)
    start = next(t for t in range(m) if (cyc[t], cyc[(t + 1) % m]) in rev_pred)
    cyc = cyc[start:] + cyc[:start]
    pairs = []
    for t in range(m):
        edge = (cyc[t], cyc[(t + 1) % m])
        if edge in rev_pred:
            pairs.append(rev_pred[edge])
    strict = _strictify(P, pairs)
    return AlternatingCycle(tuple(strict), strict=True)


def is_reversible(P, S):
    return not isinstance(reverse_set(P, S), AlternatingCycle)


def find_strict_alternating_cycle(P, S):
    """Search ``S`` directly for a strict alternating cycle.

    Exhaustive backtracking over cyclic sequences of pairs, pruned by the
    strictness conditions as each pair is appended.  It does not use a
    topological sort, so it serves as an independent check on
    :func:`reverse_set`.  Exponential in ``|S|``.
    """
    S = sorted(set(S))
    _check_pairs(P, S)
    idx, up = P.index, P._up
    X = [idx[x] for x, _ in S]
    Y = [idx[y] for _, y in S]
    m = len(S)

    def le(a, b):
        return (up[a] >> b) & 1

    def comp(a, b):
        return (up[a] >> b) & 1 or (up[b] >> a) & 1

    def extend(chain):
        last = chain[-1]
        lx, ly = X[last], Y[last]
        first_y = Y[chain[0]]
        for t in range(chain[0] + 1, m):
            if t in chain:
                continue
            x, y = X[t], Y[t]
            if not le(lx, y):
                continue
            if x == lx or y == ly or comp(lx, x) or comp(ly, y):
                continue
            ok = True
            for c in chain[:-1]:
                px, py = X[c], Y[c]
                if le(px, y) or px == x or py == y or comp(px, x) or comp(py, y):
                    ok = False
                    break
            if not ok:
                continue
            if any(le(x, Y[c]) for c in chain[1:]):
                continue
            if le(x, first_y):
                return chain + [t]
            found = extend(chain + [t])
            if found:
                return found
        return None

    for s in range(m):
        found = extend([s])
        if found:
            return AlternatingCycle(tuple(S[t] for t in found), strict=True)
    return None


def is_realizer(P, R):
    """True iff the extensions in ``R`` realize ``P``.

    Raises :class:`NotALinearExtension` naming the first bad extension.
    """
    exts = list(R.extensions if isinstance(R, Realizer) else R)
    if not exts:
        return False
    positions = []
    for k, ext in enumerate(exts):
        if not is_linear_extension(P, ext):
            raise NotALinearExtension(k)
        positions.append({x: t for t, x in enumerate(ext)})
    for x, y in incomparable_pairs(P):
        if not any(pos[x] > pos[y] for pos in positions):
            return False
    return True


def restrict_extension(order, keep):
    keep = set(keep)
    return tuple(x for x in order if x in keep)


# -- dimension ----------------------------------------------------------


def _conflict_order(P, pairs):
    """Order pairs so that mutually exclusive ones are decided early."""
    deg = {}
    for p in pairs:
        deg[p] = sum(1 for q in pairs if q != p and P.le(p[0], q[1]) and P.le(q[0], p[1]))
    return sorted(pairs, key=lambda p: (-deg[p], p))


def dimension_exact(P, max_k=6, max_inc=60, budget=2_000_000):
    """Least d <= max_k such that Inc(P) is covered by d reversible sets.

    Returns ``None`` when the dimension exceeds ``max_k``.  The search
    assigns critical pairs to buckets by backtracking; each bucket keeps the
    transitive closure of its augmented order as bitmasks so a reversal is
    rejected in O(1) when it would close a cycle.
    """
    n = len(P)
    if n <= 1 or P.is_chain():
        return 1
    inc = incomparable_pairs(P)
    if len(inc) > max_inc:
        raise SearchBudgetExceeded(f"|Inc(P)| = {len(inc)} exceeds the limit {max_inc}")
    pairs = _conflict_order(P, sorted(critical_pairs(P)))
    idx = P.index
    plist = [(idx[x], idx[y]) for x, y in pairs]
    counter = [0]

    def add(state, x, y):
        up, down = state
        up = list(up)
        down = list(down)
        ux, dy = up[x], down[y]
        for a in _bits(dy):
            up[a] |= ux
        for b in _bits(ux):
            down[b] |= dy
        return up, down

    def solve(k, states, used):
        counter[0] += 1
        if counter[0] > budget:
            raise SearchBudgetExceeded(f"dimension search exceeded {budget} nodes")
        if k == len(plist):
            return True
        x, y = plist[k]
        # already reversed somewhere: no choice needed
        for b in range(used):
            if (states[b][0][y] >> x) & 1:
                return solve(k + 1, states, used)
        for b in range(min(used + 1, len(states))):
            up, down = states[b]
            if (up[x] >> y) & 1:
                continue
            new = list(states)
            new[b] = add(states[b], x, y)
            if solve(k + 1, new, max(used, b + 1)):
                return True
        return False

    base = (tuple(P._up), tuple(P._down))
    for d in range(2, max_k + 1):
        if solve(0, [base] * d, 0):
            return d
    return None


def standard_example(d):
    """S_d: minimal a_1..a_d, maximal b_1..b_d, a_i < b_j iff i != j."""
    if d < 2:
        raise PosetError("the standard example needs d >= 2")
    w = len(str(d))
    a = [f"a{i:0{w}d}" for i in range(1, d + 1)]
    b = [f"b{i:0{w}d}" for i in range(1, d + 1)]
    covers = [(a[i], b[j]) for i in range(d) for j in range(d) if i != j]
    return Poset(a + b, covers)


# -- unfolding ----------------------------------------------------------


@dataclass(frozen=True)
class Unfolding:
    """Alternating layers A_0, B_0, A_1, B_1, ... covering the poset."""

    layers: tuple = field(default_factory=tuple)

    @property
    def A(self):
        return self.layers[0::2]

    @property
    def B(self):
        return self.layers[1::2]


def unfold(P, x0):
    if x0 not in P:
        raise UnknownElement(f"unknown element {x0!r}")
    if not P.is_minimal(x0):
        raise NotMinimal(f"{x0} is not a minimal element")
    if not P.is_connected():
        raise NotConnected("unfolding requires a connected poset")
    everything = set(P.elements)
    layers = [frozenset([x0])]
    seen = {x0}
    B = frozenset(y for y in P.upset(x0) if y != x0)
    if B:
        layers.append(B)
        seen |= B
    while seen != everything:
        A = frozenset(x for x in everything - seen if any(P.lt(x, y) for y in layers[-1]))
        if not A and len(layers) % 2 == 0 and not layers[-1]:
            raise NotConnected("unfolding stalled")
        layers.append(A)
        seen |= A
        if seen == everything:
            break
        B = frozenset(y for y in everything - seen if any(P.lt(x, y) for x in A))
        layers.append(B)
        seen |= B
    return Unfolding(tuple(layers))
