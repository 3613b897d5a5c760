"""Subset arithmetic on Kneser graphs K(n, r).

A vertex is an ``int`` bitmask over the ground set [n]: element ``x`` lives in
bit ``x - 1``.  Numeric order of masks is the canonical (colex) order used
everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb
from typing import Iterable, Iterator, Sequence

MAX_N = 64
DEFAULT_ENUMERATION_CAP = 10**7


class KneserError(ValueError):
    """Invalid parameters or vertex data."""


class CapacityError(KneserError):
    """Enumeration would exceed the configured vertex cap."""


def make_vertex(elements: Iterable[int]) -> int:
    """Return the bitmask of a set of 1-based elements."""
    mask = 0
    for x in elements:
        if x < 1 or x > MAX_N:
            raise KneserError(f"element {x} outside [1, {MAX_N}]")
        bit = 1 << (x - 1)
        if mask & bit:
            raise KneserError(f"repeated element {x}")
        mask |= bit
    return mask


def elements(v: int) -> tuple[int, ...]:
    """Ascending 1-based elements of a vertex mask."""
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length())
        v ^= low
    return tuple(out)


def format_vertex(v: int) -> str:
    return " ".join(str(x) for x in elements(v))


def are_adjacent(u: int, v: int) -> bool:
    """Kneser adjacency: the two subsets are disjoint."""
    return u & v == 0 and u != v


def in_closed_neighborhood(u: int, v: int) -> bool:
    return u == v or u & v == 0


def closed_neighborhood_count(v: int, D: Iterable[int]) -> int:
    """|N[v] ∩ D|."""
    return sum(1 for u in D if u == v or u & v == 0)


def colex_subsets(n: int, r: int) -> Iterator[int]:
    """All r-subsets of [n] as masks, increasing (Gosper's hack)."""
    if r == 0:
        yield 0
        return
    v = (1 << r) - 1
    limit = 1 << n
    while v < limit:
        yield v
        low = v & -v
        ripple = v + low
        v = (((ripple ^ v) >> 2) // low) | ripple


@dataclass(frozen=True)
class KneserParams:
    n: int
    r: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.r, int):
            raise KneserError("n and r must be integers")
        if not 1 <= self.n <= MAX_N:
            raise KneserError(f"n must be in [1, {MAX_N}], got {self.n}")
        if not 1 <= self.r <= self.n:
            raise KneserError(f"r must be in [1, n], got r={self.r}, n={self.n}")

    def vertex_count(self) -> int:
        return comb(self.n, self.r)

    def degree(self) -> int:
        return comb(self.n - self.r, self.r) if self.n >= 2 * self.r else 0

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    def is_vertex(self, v: int) -> bool:
        return v > 0 and v.bit_count() == self.r and v >> self.n == 0

    def check_vertex(self, v: int) -> int:
        if not self.is_vertex(v):
            raise KneserError(
                f"{{{format_vertex(v)}}} is not an {self.r}-subset of [{self.n}]"
            )
        return v

    def vertices(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[int]:
        return enumerate_vertices(self, cap)


def enumerate_vertices(
    params: KneserParams, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[int]:
    """All C(n, r) vertices in canonical order."""
    count = params.vertex_count()
    if count > cap:
        raise CapacityError(
            f"K({params.n},{params.r}) has {count} vertices, above the cap of {cap}"
        )
    return list(colex_subsets(params.n, params.r))


class VertexSet(Sequence[int]):
    """Immutable, canonically ordered, duplicate-free set of vertices of K(n, r)."""

    __slots__ = ("params", "_members", "_lookup")

    def __init__(self, params: KneserParams, members: Iterable[int] = ()):
        seen = set()
        for v in members:
            params.check_vertex(v)
            seen.add(v)
        self.params = params
        self._members = tuple(sorted(seen))
        self._lookup = frozenset(seen)

    @classmethod
    def from_elements(
        cls, params: KneserParams, rows: Iterable[Iterable[int]], strict: bool = True
    ) -> "VertexSet":
        masks = [make_vertex(row) for row in rows]
        if strict and len(set(masks)) != len(masks):
            raise KneserError("duplicate vertex in input")
        return cls(params, masks)

    def __len__(self) -> int:
        return len(self._members)

    def __getitem__(self, i):
        return self._members[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self._members)

    def __contains__(self, v) -> bool:
        return v in self._lookup

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.params == other.params and self._members == other._members

    def __hash__(self) -> int:
        return hash((self.params, self._members))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, elements(v))) + "}" for v in self)
        return f"VertexSet(K({self.params.n},{self.params.r}), [{body}])"

    @property
    def members(self) -> tuple[int, ...]:
        return self._members

    def element_rows(self) -> list[tuple[int, ...]]:
        return [elements(v) for v in self._members]

    def union(self, other: Iterable[int]) -> "VertexSet":
        return VertexSet(self.params, [*self._members, *other])

    def difference(self, other: Iterable[int]) -> "VertexSet":
        drop = set(other)
        return VertexSet(self.params, [v for v in self._members if v not in drop])

    def isdisjoint(self, other: Iterable[int]) -> bool:
        return self._lookup.isdisjoint(other)

    def lift(self, n: int) -> "VertexSet":
        """The same subsets viewed as vertices of K(n, r), n >= current n."""
        if n < self.params.n:
            raise KneserError("can only lift to a larger ground set")
        return VertexSet(KneserParams(n, self.params.r), self._members)


class LevelMode(str, Enum):
    EXACT = "exact"
    AT_LEAST = "at_least"
    AT_MOST = "at_most"


@dataclass(frozen=True)
class OccurrenceProfile:
    """counts[x - 1] is the number of members containing element x."""

    counts: tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.counts[x - 1]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def level_set(self, a: int, mode: LevelMode | str = LevelMode.EXACT) -> frozenset[int]:
        return level_sets(self, a, mode)


def occurrence_profile(D: VertexSet | Iterable[int], n: int | None = None) -> OccurrenceProfile:
    if n is None:
        if not isinstance(D, VertexSet):
            raise KneserError("n is required for a bare iterable of vertices")
        n = D.params.n
    counts = [0] * n
    for v in D:
        for x in elements(v):
            counts[x - 1] += 1
    return OccurrenceProfile(tuple(counts))


def level_sets(
    profile: OccurrenceProfile, a: int, mode: LevelMode | str = LevelMode.EXACT
) -> frozenset[int]:
    """X_a, X_a^>= or X_a^<= as a set of 1-based elements."""
    if a < 0:
        raise KneserError("level must be non-negative")
    mode = LevelMode(mode)
    if mode is LevelMode.EXACT:
        keep = lambda c: c == a
    elif mode is LevelMode.AT_LEAST:
        keep = lambda c: c >= a
    else:
        keep = lambda c: c <= a
    return frozenset(x for x, c in enumerate(profile.counts, start=1) if keep(c))
