"""Decision procedures with reproducible witnesses.

Every check scans in canonical order and reports the first violation, so a
failing certificate can be re-checked by one neighbourhood count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .core import (
    DEFAULT_ENUMERATION_CAP,
    KneserError,
    KneserParams,
    VertexSet,
    colex_subsets,
    elements,
    enumerate_vertices,
    occurrence_profile,
)


@dataclass(frozen=True)
class CertResult:
    holds: bool
    witness: int | tuple[int, int] | None = None
    detail: dict[int, int] | None = field(default=None, compare=False)

    def __bool__(self) -> bool:
        return self.holds

    def to_json_obj(self) -> dict:
        obj: dict = {"holds": self.holds, "witness": None}
        if isinstance(self.witness, tuple):
            obj["witness"] = [list(elements(w)) for w in self.witness]
        elif self.witness is not None:
            obj["witness"] = list(elements(self.witness))
        if self.detail is not None:
            obj["counts"] = [
                {"vertex": list(elements(v)), "count": c} for v, c in self.detail.items()
            ]
        return obj


def _members(D: Iterable[int]) -> list[int]:
    return list(D)


def neighborhood_counts(
    params: KneserParams, D: Iterable[int], cap: int = DEFAULT_ENUMERATION_CAP
) -> dict[int, int]:
    """|N[v] ∩ D| for every vertex v, in canonical order."""
    members = _members(D)
    return {
        v: sum(1 for u in members if u & v == 0 or u == v)
        for v in enumerate_vertices(params, cap)
    }


def _count_check(params, D, predicate, detail, cap) -> CertResult:
    members = _members(D)
    counts = {} if detail else None
    witness = None
    for v in enumerate_vertices(params, cap):
        c = 0
        for u in members:
            if u & v == 0 or u == v:
                c += 1
        if counts is not None:
            counts[v] = c
        if witness is None and not predicate(c):
            witness = v
            if counts is None:
                break
    return CertResult(witness is None, witness, counts)


def is_k_tuple_dominating(
    params: KneserParams,
    D: Iterable[int],
    k: int,
    detail: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CertResult:
    """Every vertex has at least k members of D in its closed neighbourhood."""
    if k < 1:
        raise KneserError("k must be at least 1")
    return _count_check(params, D, lambda c: c >= k, detail, cap)


def is_k_tuple_dominating_r2(params: KneserParams, D: Iterable[int], k: int) -> CertResult:
    """Occurrence-sum test for K(n, 2).

    {a, b} sees exactly |D| - (i_a + i_b) members when it is outside D and
    |D| + 2 - (i_a + i_b) when it is inside, so domination reduces to pair
    sums of element occurrences.
    """
    if params.r != 2:
        raise KneserError(f"the occurrence test needs r = 2, got r = {params.r}")
    if k < 1:
        raise KneserError("k must be at least 1")
    if params.n < 5:
        return is_k_tuple_dominating(params, D, k)
    members = set(D)
    size = len(members)
    occ = occurrence_profile(members, params.n).counts
    for v in colex_subsets(params.n, 2):
        a, b = elements(v)
        limit = size - k + 2 if v in members else size - k
        if occ[a - 1] + occ[b - 1] > limit:
            return CertResult(False, v)
    return CertResult(True)


def closed_neighborhoods_meet(params: KneserParams, u: int, v: int) -> bool:
    """N[u] ∩ N[v] is non-empty.

    Either the two vertices are adjacent (or equal), or some r-subset avoids
    both, which happens exactly when at least r elements lie outside u ∪ v.
    """
    if u == v or u & v == 0:
        return True
    return params.n - (u | v).bit_count() >= params.r


def _interval_test(params: KneserParams, u: int, v: int) -> bool:
    common = (u & v).bit_count()
    return 1 <= common <= 3 * params.r - 1 - params.n


def is_2_packing(params: KneserParams, S: Iterable[int]) -> CertResult:
    """Closed neighbourhoods of members are pairwise disjoint.

    In the range 2r+1 <= n <= 3r-2 the intersection-size criterion is
    evaluated as well and must agree with the direct test.
    """
    members = sorted(set(S))
    cross = 2 * params.r + 1 <= params.n <= 3 * params.r - 2
    for i, u in enumerate(members):
        for v in members[i + 1 :]:
            direct = not closed_neighborhoods_meet(params, u, v)
            if cross and direct != _interval_test(params, u, v):
                raise AssertionError(
                    f"packing tests disagree on {elements(u)}, {elements(v)}"
                )
            if not direct:
                return CertResult(False, (u, v))
    return CertResult(True)


def is_perfect_1_code(
    params: KneserParams, C: Iterable[int], cap: int = DEFAULT_ENUMERATION_CAP
) -> CertResult:
    """Closed neighbourhoods of C partition the vertex set."""
    return _count_check(params, C, lambda c: c == 1, False, cap)


def certify_tight_domination(
    params: KneserParams,
    D: Iterable[int],
    k: int,
    detail: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> CertResult:
    """|N[v] ∩ D| == k for every vertex v."""
    return _count_check(params, D, lambda c: c == k, detail, cap)


def is_steiner_system(t: int, r: int, n: int, blocks: Iterable[int]) -> CertResult:
    """Every t-subset of [n] lies in exactly one block.

    The witness is the first offending t-subset, or the first block that is
    not an r-subset of [n].
    """
    if not 1 <= t <= r <= n:
        raise KneserError(f"need 1 <= t <= r <= n, got t={t}, r={r}, n={n}")
    blocks = sorted(set(blocks))
    for b in blocks:
        if b.bit_count() != r or b >> n:
            return CertResult(False, b)
    seen: dict[int, int] = {}
    for b in blocks:
        for sub in _subsets_of(b, t):
            seen[sub] = seen.get(sub, 0) + 1
    for sub in colex_subsets(n, t):
        if seen.get(sub, 0) != 1:
            return CertResult(False, sub)
    return CertResult(True)


def _subsets_of(mask: int, t: int):
    """t-subsets of a mask, via index combinations."""
    bits = [1 << (x - 1) for x in elements(mask)]
    for combo in combinations(bits, t):
        yield sum(combo)


def steiner_block_count(t: int, r: int, n: int) -> int:
    return comb(n, t) // comb(r, t)
