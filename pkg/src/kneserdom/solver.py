"""Exact branch-and-bound for γ×k and ρ, an exhaustive oracle, and the ILP writer.

Both searches use fresh-element orbit exclusion.  Let ``touched`` be the
union of the vertices chosen so far.  Any permutation of the untouched
elements fixes the current partial solution, so once every solution
containing ``u`` has been explored, every vertex ``w`` with
``w & touched == u & touched`` can be excluded too.  Pass ``symmetry=False``
to search the plain include/exclude tree instead.
"""

from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import TextIO

from . import certify
from .bounds import packing_value
from .constructions import best_construction
from .core import (
    DEFAULT_ENUMERATION_CAP,
    KneserError,
    KneserParams,
    VertexSet,
    elements,
    enumerate_vertices,
)

BRUTE_FORCE_CAP = 20


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 50_000_000
    max_seconds: float = 300.0


@dataclass(frozen=True)
class PruneRecord:
    """A pruned subtree: its partial assignment and the bound that closed it.

    ``bound`` is None when the subtree was infeasible outright.
    """

    included: tuple[int, ...]
    excluded: tuple[int, ...]
    bound: int | None


@dataclass
class SolveOutcome:
    optimum: int | None
    witness: VertexSet | None
    exact: bool
    nodes_explored: int
    lower_bound: int | None = None
    proof: list[PruneRecord] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": None if self.witness is None else [list(r) for r in self.witness.element_rows()],
            "exact": self.exact,
            "nodes": self.nodes_explored,
        }


class _BudgetExceeded(Exception):
    pass


def _index_neighborhoods(verts: list[int]) -> list[list[int]]:
    """Indices of N[v] for every vertex, in canonical order."""
    return [[j for j, w in enumerate(verts) if i == j or u & w == 0] for i, u in enumerate(verts)]


class _DominationSearch:
    def __init__(self, params, k, verts, budget, symmetry, trace, incumbent):
        self.params = params
        self.k = k
        self.verts = verts
        self.members = _index_neighborhoods(verts)
        self.closed_degree = len(self.members[0])
        self.budget = budget
        self.symmetry = symmetry
        self.trace = trace
        self.proof: list[PruneRecord] = []
        self.best_size = len(incumbent) if incumbent is not None else len(verts) + 1
        self.best = list(incumbent) if incumbent is not None else None
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds
        n_verts = len(verts)
        self.cover = [0] * n_verts
        self.avail = [self.closed_degree] * n_verts
        self.chosen: list[int] = []
        self.excluded: list[int] = []

    def _record(self, bound):
        if self.trace:
            self.proof.append(
                PruneRecord(
                    tuple(self.verts[i] for i in self.chosen),
                    tuple(self.verts[i] for i in self.excluded),
                    bound,
                )
            )

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetExceeded
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded

    def _orbit(self, u: int, undecided: int, touched: int) -> list[int]:
        if not self.symmetry:
            return [u]
        pattern = self.verts[u] & touched
        return [
            j for j, w in enumerate(self.verts) if undecided >> j & 1 and w & touched == pattern
        ]

    def branch_point(self, undecided: int):
        """Bounds at the current node, plus the vertex to branch on.

        Returns (status, value): ("done", size), ("prune", bound) or ("branch", u).
        """
        k = self.k
        s = len(self.chosen)
        target = self.best_size - 1
        worst = 0
        total = 0
        pick = -1
        pick_slack = None
        for v, c in enumerate(self.cover):
            deficit = k - c
            if deficit <= 0:
                continue
            total += deficit
            if deficit > worst:
                worst = deficit
            slack = self.avail[v] - deficit
            if pick_slack is None or slack < pick_slack:
                pick_slack = slack
                pick = v
        if worst == 0:
            return "done", s
        if pick_slack < 0:
            return "prune", None
        bound = max(s + worst, s - (-total // self.closed_degree))
        if bound > target:
            return "prune", bound
        cand = [j for j in self.members[pick] if undecided >> j & 1]
        return "branch", cand[0]

    def include(self, u):
        for v in self.members[u]:
            self.cover[v] += 1
            self.avail[v] -= 1
        self.chosen.append(u)

    def uninclude(self, u):
        self.chosen.pop()
        for v in self.members[u]:
            self.cover[v] -= 1
            self.avail[v] += 1

    def exclude(self, ws):
        for w in ws:
            for v in self.members[w]:
                self.avail[v] -= 1
        self.excluded.extend(ws)

    def unexclude(self, ws):
        del self.excluded[len(self.excluded) - len(ws) :]
        for w in ws:
            for v in self.members[w]:
                self.avail[v] += 1

    def run(self, undecided: int, touched: int):
        self._tick()
        status, value = self.branch_point(undecided)
        if status == "done":
            if value < self.best_size:
                self.best_size = value
                self.best = [self.verts[i] for i in self.chosen]
            return
        if status == "prune":
            self._record(value)
            return
        u = value
        self.include(u)
        self.run(undecided & ~(1 << u), touched | self.verts[u])
        self.uninclude(u)
        ws = self._orbit(u, undecided, touched)
        self.exclude(ws)
        rest = undecided
        for w in ws:
            rest &= ~(1 << w)
        self.run(rest, touched)
        self.unexclude(ws)


def _recursion_room(depth: int):
    need = depth + 200
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def _solve_subtree(params, k, budget, symmetry, trace, incumbent, included, excluded):
    """Worker entry for the parallel split: search below a fixed first decision."""
    verts = enumerate_vertices(params)
    _recursion_room(2 * len(verts))
    search = _DominationSearch(params, k, verts, budget, symmetry, trace, incumbent)
    index = {v: i for i, v in enumerate(verts)}
    undecided = (1 << len(verts)) - 1
    touched = 0
    for v in included:
        search.include(index[v])
        undecided &= ~(1 << index[v])
        touched |= v
    search.exclude([index[v] for v in excluded])
    for v in excluded:
        undecided &= ~(1 << index[v])
    finished = True
    try:
        search.run(undecided, touched)
    except _BudgetExceeded:
        finished = False
    return search.best, search.nodes, finished, search.proof


def min_ktuple_dominating(
    params: KneserParams,
    k: int,
    budget: Budget = Budget(),
    symmetry: bool = True,
    parallel: bool = False,
    trace: bool = False,
    use_packing_bound: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> SolveOutcome:
    """Minimum k-tuple dominating set of K(n, r) by branch-and-bound.

    The incumbent is seeded with the best certified construction.  When the
    budget runs out the incumbent is returned with ``exact=False``.
    """
    if k < 1:
        raise KneserError("k must be at least 1")
    if params.r >= 2 and params.n < 2 * params.r:
        raise KneserError(f"K({params.n},{params.r}) has no edges; need n >= 2r")
    verts = enumerate_vertices(params, cap)
    closed = params.degree() + 1 if params.r >= 2 else params.n
    if k > closed:
        raise KneserError(f"k = {k} exceeds the closed neighbourhood size {closed}; no k-tuple dominating set exists")
    seed = best_construction(params, k, cap)
    incumbent = list(seed[1]) if seed is not None else list(verts)

    root_bound = k
    if use_packing_bound and params.r >= 2:
        rho = packing_value(params.n, params.r)
        root_bound = max(root_bound, k * rho.lower)
    if len(incumbent) <= root_bound:
        return SolveOutcome(len(incumbent), VertexSet(params, incumbent), True, 0, root_bound)

    _recursion_room(2 * len(verts))
    search = _DominationSearch(params, k, verts, budget, symmetry, trace, incumbent)
    undecided = (1 << len(verts)) - 1
    finished = True
    if parallel:
        best, nodes, finished, proof = _parallel_split(
            search, params, k, budget, symmetry, trace, incumbent, undecided
        )
        search.best, search.nodes, search.proof = best, nodes, proof
        search.best_size = len(best)
    else:
        try:
            search.run(undecided, 0)
        except _BudgetExceeded:
            finished = False
    witness = VertexSet(params, search.best)
    if not certify.is_k_tuple_dominating(params, witness, k):
        raise AssertionError("solver produced a set that is not k-tuple dominating")
    optimum = len(witness)
    exact = finished or optimum <= root_bound
    return SolveOutcome(optimum, witness, exact, search.nodes, root_bound, search.proof)


def _parallel_split(search, params, k, budget, symmetry, trace, incumbent, undecided):
    status, value = search.branch_point(undecided)
    if status != "branch":
        try:
            search.run(undecided, 0)
            return search.best, search.nodes, True, search.proof
        except _BudgetExceeded:
            return search.best, search.nodes, False, search.proof
    u = value
    first = search.verts[u]
    ws = [search.verts[j] for j in search._orbit(u, undecided, 0)]
    jobs = [((first,), ()), ((), tuple(ws))]
    with ProcessPoolExecutor(max_workers=2) as pool:
        futures = [
            pool.submit(_solve_subtree, params, k, budget, symmetry, trace, incumbent, inc, exc)
            for inc, exc in jobs
        ]
        results = [f.result() for f in futures]
    best = list(incumbent)
    nodes = 1
    finished = True
    proof: list[PruneRecord] = []
    for found, n_nodes, done, part in results:
        nodes += n_nodes
        finished = finished and done
        proof.extend(part)
        if len(found) < len(best):
            best = found
    return best, nodes, finished, proof


# -- 2-packing ----------------------------------------------------------------------


class _PackingSearch:
    def __init__(self, params, verts, budget, symmetry, color_limit=3000):
        self.params = params
        self.verts = verts
        self.budget = budget
        self.symmetry = symmetry
        self.color_limit = color_limit
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds
        self.best: list[int] = []
        self.chosen: list[int] = []
        self._compat: dict[int, int] = {}

    def compatible(self, i: int) -> int:
        """Bitmask of vertices whose closed neighbourhoods avoid that of vertex i."""
        mask = self._compat.get(i)
        if mask is None:
            params, u = self.params, self.verts[i]
            cross = 2 * params.r + 1 <= params.n <= 3 * params.r - 2
            mask = 0
            for j, w in enumerate(self.verts):
                if j == i:
                    continue
                if cross:
                    ok = certify._interval_test(params, u, w)
                else:
                    ok = not certify.closed_neighborhoods_meet(params, u, w)
                if ok:
                    mask |= 1 << j
            self._compat[i] = mask
        return mask

    def _color_bound(self, cand: int) -> int:
        """Greedy colouring of the candidate set: a clique uses each colour class at most once."""
        count = cand.bit_count()
        if count <= 1 or count > self.color_limit:
            return count
        colors = 0
        rest = cand
        while rest:
            colors += 1
            q = rest
            while q:
                j = (q & -q).bit_length() - 1
                rest &= ~(1 << j)
                q &= ~(1 << j)
                q &= ~self.compatible(j)
        return colors

    def run(self, cand: int, touched: int):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetExceeded
        if self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded
        if len(self.chosen) > len(self.best):
            self.best = [self.verts[i] for i in self.chosen]
        while cand:
            if len(self.chosen) + self._color_bound(cand) <= len(self.best):
                return
            u = (cand & -cand).bit_length() - 1
            self.chosen.append(u)
            self.run(cand & self.compatible(u), touched | self.verts[u])
            self.chosen.pop()
            if self.symmetry:
                pattern = self.verts[u] & touched
                for j, w in enumerate(self.verts):
                    if cand >> j & 1 and w & touched == pattern:
                        cand &= ~(1 << j)
            else:
                cand &= ~(1 << u)


def max_2_packing(
    params: KneserParams,
    budget: Budget = Budget(),
    symmetry: bool = True,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> SolveOutcome:
    """Maximum 2-packing as a maximum clique of the "closed neighbourhoods disjoint" relation."""
    verts = enumerate_vertices(params, cap)
    _recursion_room(2 * len(verts))
    search = _PackingSearch(params, verts, budget, symmetry)
    finished = True
    try:
        search.run((1 << len(verts)) - 1, 0)
    except _BudgetExceeded:
        finished = False
    witness = VertexSet(params, search.best)
    if not certify.is_2_packing(params, witness):
        raise AssertionError("solver produced a set that is not a 2-packing")
    return SolveOutcome(len(witness), witness, finished, search.nodes)


# -- exhaustive oracle ---------------------------------------------------------------


def brute_force_min(params: KneserParams, k: int) -> SolveOutcome:
    """Smallest k-tuple dominating set by enumerating subsets in increasing size.

    Returns optimum None when no subset works.
    """
    verts = enumerate_vertices(params)
    if len(verts) > BRUTE_FORCE_CAP:
        raise KneserError(f"brute force is limited to {BRUTE_FORCE_CAP} vertices, K({params.n},{params.r}) has {len(verts)}")
    neighborhoods = [
        sum(1 << j for j, w in enumerate(verts) if u == w or u & w == 0) for u in verts
    ]
    checked = 0
    for size in range(k, len(verts) + 1):
        for combo in combinations(range(len(verts)), size):
            checked += 1
            mask = 0
            for j in combo:
                mask |= 1 << j
            if all((nb & mask).bit_count() >= k for nb in neighborhoods):
                witness = VertexSet(params, [verts[j] for j in combo])
                return SolveOutcome(size, witness, True, checked)
    return SolveOutcome(None, None, True, checked)


# -- ILP export ----------------------------------------------------------------------


def lp_name(v: int) -> str:
    return "x_" + "_".join(str(x) for x in elements(v))


def export_lp(params: KneserParams, k: int, sink: TextIO | None = None, cap: int = DEFAULT_ENUMERATION_CAP) -> str:
    """The minimum k-tuple domination ILP in CPLEX LP format.  Also written to ``sink`` if given."""
    verts = enumerate_vertices(params, cap)
    names = [lp_name(v) for v in verts]
    lines = ["Minimize", " obj: " + " + ".join(names), "Subject To"]
    for u, name in zip(verts, names):
        terms = [names[j] for j, w in enumerate(verts) if u == w or u & w == 0]
        lines.append(f" cN_{name[2:]}: {' + '.join(terms)} >= {k}")
    lines.append("Binary")
    lines.extend(f" {name}" for name in names)
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if sink is not None:
        sink.write(text)
    return text
