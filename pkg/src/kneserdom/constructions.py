"""Deterministic builders for the explicit vertex families.

Every builder returns a :class:`VertexSet`; callers are expected to confirm
the claimed property with :mod:`kneserdom.certify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import combinations
from math import comb

from . import certify
from .core import (
    DEFAULT_ENUMERATION_CAP,
    KneserError,
    KneserParams,
    VertexSet,
    colex_subsets,
    enumerate_vertices,
    make_vertex,
)
from .formats import parse_text_rows


class ConstructionError(KneserError):
    """Builder preconditions are not met."""


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _pair(a: int, b: int) -> int:
    return (1 << (a - 1)) | (1 << (b - 1))


def _wrap(x: int, m: int) -> int:
    return (x - 1) % m + 1


def _k2(n: int) -> KneserParams:
    return KneserParams(n, 2)


def _all_pairs(lo: int, hi: int) -> list[int]:
    return [_pair(a, b) for a, b in combinations(range(lo, hi + 1), 2)]


# -- families on general K(n, r) ------------------------------------------------


def disjoint_family(n: int, r: int, m: int) -> VertexSet:
    """m pairwise disjoint consecutive blocks [(j-1)r+1 .. jr]."""
    if n < r * m:
        raise ConstructionError(f"{m} disjoint {r}-subsets need n >= {r * m}, got {n}")
    block = (1 << r) - 1
    return VertexSet(KneserParams(n, r), [block << (j * r) for j in range(m)])


def complement_set(params: KneserParams, D, cap: int = DEFAULT_ENUMERATION_CAP) -> VertexSet:
    drop = set(D)
    return VertexSet(params, [v for v in enumerate_vertices(params, cap) if v not in drop])


def large_k_complement(n: int, r: int, t: int) -> VertexSet:
    """V minus the first t+1 vertices; optimal for k = C(n-r, r) - t past the threshold."""
    if t < 0:
        raise ConstructionError("t must be non-negative")
    threshold = (t + 3) * r - _ceil_div(t + 2, 2)
    if n < threshold:
        raise ConstructionError(f"need n >= {threshold} for t = {t}, r = {r}")
    params = KneserParams(n, r)
    if params.degree() - t < 1:
        raise ConstructionError(f"k = C(n-r, r) - t = {params.degree() - t} < 1")
    if t + 1 >= params.vertex_count():
        raise ConstructionError("removing t+1 vertices leaves nothing")
    return VertexSet(params, enumerate_vertices(params)[t + 1 :])


def boundary_threshold(r: int, t: int) -> int:
    """The n one below the large-k threshold."""
    return (t + 3) * r - _ceil_div(t + 2, 2) - 1


def _interval(lo: int, hi: int) -> int:
    return ((1 << (hi - lo + 1)) - 1) << (lo - 1)


def boundary_family_S(n: int, r: int, t: int) -> VertexSet:
    """t + 2 vertices, none of which fits with the rest inside one closed neighbourhood.

    Consecutive r-intervals overlapping in one element, in chains of two
    (and one chain of three when t is odd); r - 1 elements are left over, so
    no vertex avoids all of them.
    """
    if r < 2 or t < 0:
        raise ConstructionError("need r >= 2 and t >= 0")
    expected = boundary_threshold(r, t)
    if n != expected:
        raise ConstructionError(f"boundary family for r={r}, t={t} lives at n={expected}, got {n}")
    width = 2 * r - 1
    chains = t // 2 + 1 if t % 2 == 0 else (t - 1) // 2
    rows = []
    for x in range(chains):
        xi = x * width
        rows += [_interval(xi + 1, xi + r), _interval(xi + r, xi + 2 * r - 1)]
    if t % 2:
        xi = chains * width
        rows += [
            _interval(xi + 1, xi + r),
            _interval(xi + r, xi + 2 * r - 1),
            _interval(xi + 2 * r - 1, xi + 3 * r - 2),
        ]
    S = VertexSet(KneserParams(n, r), rows)
    if len(S) != t + 2:
        raise AssertionError(f"boundary family has {len(S)} vertices, expected {t + 2}")
    return S


# -- K(n, 2) families ---------------------------------------------------------------


def dhat_n2(k: int, n: int | None = None) -> VertexSet:
    """The triangle on [3] plus k disjoint pairs {2a, 2a+1}, a = 2..k+1."""
    if k < 2:
        raise ConstructionError("k must be at least 2")
    base = 2 * k + 3
    n = base if n is None else n
    if n < base:
        raise ConstructionError(f"needs n >= {base}")
    rows = _all_pairs(1, 3) + [_pair(2 * a, 2 * a + 1) for a in range(2, k + 2)]
    return VertexSet(_k2(n), rows)


def circulant_layer(m: int, i: int, n: int | None = None) -> VertexSet:
    """Pairs {x, x+i} for x in [m], indices mod m."""
    if not (i >= 1 and 2 * i < m):
        raise ConstructionError(f"need 1 <= i < m/2, got m={m}, i={i}")
    return VertexSet(_k2(n or m), [_pair(x, _wrap(x + i, m)) for x in range(1, m + 1)])


def _diameter_layer(m: int) -> list[int]:
    half = m // 2
    return [_pair(x, x + half) for x in range(1, half + 1)]


def d_m_alpha(m: int, alpha: int, n: int | None = None) -> VertexSet:
    """Union of the first floor(alpha/2) circulant layers, plus the diameter layer for odd alpha."""
    if alpha < 2 or m <= alpha:
        raise ConstructionError(f"need m > alpha >= 2, got m={m}, alpha={alpha}")
    n = m if n is None else n
    if n < m:
        raise ConstructionError("ambient n must be at least m")
    rows = []
    for i in range(1, alpha // 2 + 1):
        rows += circulant_layer(m, i, n)
    if alpha % 2:
        rows += _diameter_layer(m)
    D = VertexSet(_k2(n), rows)
    if len(D) != alpha * m // 2:
        raise AssertionError("layers of D^{m,alpha} overlap")
    return D


def d_of_h(n: int, alpha: int, h: int) -> VertexSet:
    """D^{n-h, alpha} on the bottom block together with every pair of the top h elements."""
    if not 1 <= h < n - alpha:
        raise ConstructionError(f"need 1 <= h < n - alpha, got n={n}, alpha={alpha}, h={h}")
    return d_m_alpha(n - h, alpha, n).union(_all_pairs(n - h + 1, n))


def build_k_plus_2alpha(n: int, k: int, alpha: int) -> VertexSet:
    """k-tuple dominating set of size k + 2*alpha with every occurrence at most alpha."""
    if k < 1 or alpha < 2 or n < alpha + 2 or alpha * n < 2 * k + 4 * alpha:
        raise ConstructionError(
            f"need alpha >= 2, n >= alpha + 2 and n >= 2k/alpha + 4 (n={n}, k={k}, alpha={alpha})"
        )
    D = d_m_alpha(n, alpha)
    target = k + 2 * alpha
    return VertexSet(D.params, D.members[:target])


@dataclass(frozen=True)
class AlphaParams:
    alpha: int
    k: int
    lam: int
    b: int

    @property
    def a(self) -> int:
        return self.alpha // 2

    @classmethod
    def split(cls, k: int, alpha: int) -> "AlphaParams":
        lam, b = divmod(k, alpha)
        return cls(alpha, k, lam, b)

    @property
    def case(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return "b=0"
        if b < a:
            return "1<=b<a"
        if b == a:
            return "b=a,even" if self.alpha % 2 == 0 else "b=a,odd"
        return "a<b,even" if self.alpha % 2 == 0 else "a<b,odd"

    @property
    def h(self) -> int:
        a, b, alpha = self.a, self.b, self.alpha
        if b == 0:
            return alpha + 2
        if b <= a:
            return 2 * b + 2
        return 2 * b - alpha + 2


def _cross_swap(m: int, js, xis):
    """Removed pairs {x, x+j} and their replacements {x, m+2j-1}, {x+j, m+2j}."""
    removed, added = [], []
    for j in js:
        for x in xis:
            y = _wrap(x + j, m)
            removed.append(_pair(x, y))
            added += [_pair(x, m + 2 * j - 1), _pair(y, m + 2 * j)]
    return removed, added


def build_k_plus_2alpha_plus1(n: int, k: int, alpha: int) -> VertexSet:
    """k-tuple dominating set of size k + 2*alpha + 1 at n = ceil(2k/alpha) + 3.

    Starts from D(h) and trades pairs inside the bottom block for pairs that
    cross into the top block, so every element ends with alpha or alpha + 1
    occurrences and the heavy elements are pairwise joined.
    """
    if k < 1 or alpha < 2 or n != _ceil_div(2 * k, alpha) + 3 or n < 2 * alpha + 3:
        raise ConstructionError(
            f"need alpha >= 2, n = ceil(2k/alpha) + 3 and n >= 2 alpha + 3 "
            f"(n={n}, k={k}, alpha={alpha})"
        )
    p = AlphaParams.split(k, alpha)
    a, b, h = p.a, p.b, p.h
    m = n - h
    base = d_of_h(n, alpha, h)
    removed: list[int] = []
    added: list[int] = []
    case = p.case
    if case == "1<=b<a":
        removed, added = _cross_swap(m, range(1, b + 2), range(1, alpha - 2 * b + 1))
    elif case == "b=a,odd":
        for x in range(1, b + 2):
            removed.append(_pair(x, x + 1))
            added += [_pair(x, m + 2 * x - 1), _pair(x + 1, m + 2 * x)]
    elif case == "a<b,even":
        removed, added = _cross_swap(m, range(1, b - a + 2), range(1, 2 * alpha - 2 * b + 1))
    elif case == "a<b,odd":
        removed, added = _cross_swap(m, range(1, b - a + 1), range(1, 2 * alpha - 2 * b + 1))
        half = m // 2
        for x in range(1, alpha - b + 1):
            removed.append(_pair(x, x + half))
            added += [_pair(x, n), _pair(x + half, n)]
    if not set(removed) <= set(base) or set(added) & set(base):
        raise AssertionError(f"swap sets inconsistent with D(h) in case {case}")
    if len(set(removed)) != len(removed) or len(set(added)) != len(added):
        raise AssertionError(f"repeated pair in swap sets for case {case}")
    D = base.difference(removed).union(added)
    if len(D) != k + 2 * alpha + 1:
        raise AssertionError(f"case {case} produced {len(D)} vertices, expected {k + 2 * alpha + 1}")
    return D


# -- odd graphs ---------------------------------------------------------------------

_FANO_1 = ((1, 2, 4), (1, 5, 6), (2, 3, 5), (2, 6, 7), (3, 4, 6), (1, 3, 7), (4, 5, 7))
_FANO_2 = ((3, 5, 6), (2, 3, 7), (4, 6, 7), (1, 3, 4), (1, 5, 7), (2, 4, 5), (1, 2, 6))


def fano_planes() -> tuple[VertexSet, VertexSet]:
    params = KneserParams(7, 3)
    return (
        VertexSet.from_elements(params, _FANO_1),
        VertexSet.from_elements(params, _FANO_2),
    )


def k73_gamma_sets(k: int) -> VertexSet:
    """Optimal k-tuple dominating sets of K(7,3), k = 1..5, of size 7k."""
    if not 1 <= k <= 5:
        raise ConstructionError("k must be in 1..5 for K(7,3)")
    f1, f2 = fano_planes()
    params = f1.params
    if k == 1:
        return f1
    if k == 2:
        return f1.union(f2)
    if k == 5:
        return VertexSet(params, enumerate_vertices(params))
    return complement_set(params, k73_gamma_sets(5 - k))


# Rows: (a, three disjoint pairs of the complementary side).
_SCHEME_1 = (
    (1, ((6, 7), (8, 9), (10, 11))),
    (2, ((6, 8), (9, 10), (7, 11))),
    (3, ((6, 9), (7, 10), (8, 11))),
    (4, ((6, 10), (7, 8), (9, 11))),
    (5, ((6, 11), (8, 10), (7, 9))),
)
_SCHEME_2 = (
    (6, ((1, 5), (2, 4), (3, 7))),
    (8, ((1, 2), (3, 5), (4, 7))),
    (9, ((1, 4), (2, 3), (5, 7))),
    (10, ((1, 3), (2, 7), (4, 5))),
    (11, ((1, 7), (2, 5), (3, 4))),
)


def scheme_blocks(scheme) -> list[int]:
    """The row element a joined with each two of its three pairs: abbbb blocks."""
    out = []
    for a, pairs in scheme:
        for p, q in combinations(pairs, 2):
            out.append(make_vertex((a, *p, *q)))
    return out


def complete_steiner(
    t: int, r: int, n: int, seeds, forbidden=frozenset()
) -> list[int]:
    """Extend ``seeds`` to a Steiner system S(t, r, n) by exact cover.

    Columns are the t-subsets not yet covered; at each step the column with
    the fewest candidate blocks is branched on, candidates in canonical order.
    """
    subsets_of = lambda b: list(certify._subsets_of(b, t))
    covered: set[int] = set()
    for b in seeds:
        for s in subsets_of(b):
            if s in covered:
                raise ConstructionError("seed blocks overlap on a t-subset")
            covered.add(s)
    rows: dict[int, list[int]] = {}
    for b in colex_subsets(n, r):
        if b in forbidden or b in seeds:
            continue
        subs = subsets_of(b)
        if not covered.intersection(subs):
            rows[b] = subs
    columns: dict[int, set[int]] = {s: set() for s in colex_subsets(n, t) if s not in covered}
    for b, subs in rows.items():
        for s in subs:
            columns[s].add(b)

    def select(b):
        removed = []
        for s in rows[b]:
            for other in columns[s]:
                for s2 in rows[other]:
                    if s2 != s:
                        columns[s2].discard(other)
            removed.append(columns.pop(s))
        return removed

    def deselect(b, removed):
        for s in reversed(rows[b]):
            columns[s] = removed.pop()
            for other in columns[s]:
                for s2 in rows[other]:
                    if s2 != s:
                        columns[s2].add(other)

    solution: list[int] = []

    def search() -> bool:
        if not columns:
            return True
        col = min(columns, key=lambda s: (len(columns[s]), s))
        for b in sorted(columns[col]):
            solution.append(b)
            removed = select(b)
            if search():
                return True
            deselect(b, removed)
            solution.pop()
        return False

    if not search():
        raise ConstructionError(f"no completion to S({t},{r},{n}) exists")
    return sorted([*seeds, *solution])


@lru_cache(maxsize=None)
def _steiner_members(which: int) -> tuple[int, ...]:
    if which == 1:
        seeds = [make_vertex(range(1, 6))] + scheme_blocks(_SCHEME_1)
        return tuple(complete_steiner(4, 5, 11, seeds))
    first = set(_steiner_members(1))
    seeds = [make_vertex((6, 8, 9, 10, 11))] + scheme_blocks(_SCHEME_2)
    return tuple(complete_steiner(4, 5, 11, seeds, forbidden=frozenset(first)))


def steiner_4_5_11(which: int = 1) -> VertexSet:
    """One of two disjoint S(4,5,11) systems built from the row schemes."""
    if which not in (1, 2):
        raise ConstructionError("which must be 1 or 2")
    return VertexSet(KneserParams(11, 5), _steiner_members(which))


@lru_cache(maxsize=None)
def _k115_three() -> tuple[int, ...]:
    text = resources.files("kneserdom").joinpath("data/k115_gamma3.txt").read_text()
    return tuple(parse_text_rows(text))


def k115_gamma_sets(k: int) -> VertexSet:
    """Optimal k-tuple dominating sets of K(11,5), k = 1..7, of size 66k."""
    if not 1 <= k <= 7:
        raise ConstructionError("k must be in 1..7 for K(11,5)")
    params = KneserParams(11, 5)
    if k == 1:
        return steiner_4_5_11(1)
    if k == 2:
        return steiner_4_5_11(1).union(steiner_4_5_11(2))
    if k == 3:
        return VertexSet(params, _k115_three())
    if k == 7:
        return VertexSet(params, enumerate_vertices(params))
    return complement_set(params, k115_gamma_sets(7 - k))


# -- best known set for the solver's incumbent -------------------------------------


def _candidates(params: KneserParams, k: int):
    n, r = params.n, params.r
    delta = params.degree() if n >= 2 * r else 0
    if r == 1:
        yield "clique", VertexSet(params, enumerate_vertices(params)[:k])
        return
    if n == 2 * r:
        verts = enumerate_vertices(params)
        if k == 1:
            yield "matching-half", VertexSet(params, [v for v in verts if v & 1])
        yield "all", VertexSet(params, verts)
        return
    if n >= r * (k + r):
        yield "disjoint", disjoint_family(n, r, k + r)
    if (n, r) == (7, 3) and k <= 5:
        yield "fano", k73_gamma_sets(k)
    if (n, r) == (11, 5) and k <= 7:
        yield "steiner", k115_gamma_sets(k)
    if r == 2:
        if k == 1:
            yield "triangle", VertexSet(params, _all_pairs(1, 3))
        if k >= 2 and n >= 2 * k + 3:
            yield "dhat", dhat_n2(k, n)
        for alpha in range(2, n):
            try:
                yield "k+2alpha", build_k_plus_2alpha(n, k, alpha)
            except ConstructionError:
                pass
            m = _ceil_div(2 * k, alpha) + 3
            if k >= 2 and m <= n:
                try:
                    yield "k+2alpha+1", build_k_plus_2alpha_plus1(m, k, alpha).lift(n)
                except ConstructionError:
                    pass
        if n >= 5:
            yield "pairs-of-[n-1]", VertexSet(params, _all_pairs(1, n - 1))
        if n >= 6:
            yield "pairs-of-[n-2]+edge", VertexSet(params, _all_pairs(1, n - 2) + [_pair(n - 1, n)])
    if k <= delta + 1:
        verts = enumerate_vertices(params)
        yield "complement", VertexSet(params, verts[delta + 1 - k :])


def best_construction(
    params: KneserParams, k: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> tuple[str, VertexSet] | None:
    """Smallest certified k-tuple dominating set among the builders, or None if k is infeasible."""
    if params.n >= 2 * params.r and k > params.degree() + 1:
        return None
    if params.vertex_count() > cap:
        raise certify.KneserError("graph exceeds the enumeration cap")
    best = None
    for tag, D in _candidates(params, k):
        if best is not None and len(D) >= len(best[1]):
            continue
        if certify.is_k_tuple_dominating(params, D, k, cap=cap):
            best = (tag, D)
    return best
