"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <id>: PASS|FAIL`` line and the run
ends with a summary section listing all of them.  Run on its own with
``pytest tests/test_acceptance.py -v -s`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from math import comb
from pathlib import Path

import pytest
from hypothesis import HealthCheck, Phase, given, seed, settings
from hypothesis import strategies as st

from conftest import record_acceptance
from kneserdom import bounds, certify
from kneserdom import constructions as C
from kneserdom.core import KneserParams, VertexSet, elements, enumerate_vertices, make_vertex
from kneserdom.solver import Budget, brute_force_min, export_lp, max_2_packing, min_ktuple_dominating

GOLDEN = Path(__file__).parent / "golden"
SOLVE_BUDGET = Budget(max_seconds=300.0)
PROPERTY_CASES = 10_000


def _report(criterion: str, failures: list, detail: str) -> None:
    ok = not failures
    record_acceptance(criterion, ok, detail if ok else f"{detail}; failures: {failures[:5]}")
    assert ok, failures


def test_criterion_01_packing_values():
    expected = {(7, 3): 7, (10, 4): 5, (13, 5): 3, (16, 6): 3}
    failures, times = [], []
    for (n, r), rho in expected.items():
        start = time.perf_counter()
        out = max_2_packing(KneserParams(n, r), budget=Budget(max_seconds=120.0))
        elapsed = time.perf_counter() - start
        times.append(f"K({n},{r})={out.optimum} in {elapsed:.1f}s")
        if not (out.exact and out.optimum == rho and elapsed <= 120.0):
            failures.append((n, r, out.optimum, out.exact, round(elapsed, 1)))
    _report("1 packing values", failures, ", ".join(times))


def test_criterion_02_odd_graph_k73():
    params = KneserParams(7, 3)
    failures = []
    for k in range(1, 6):
        D = C.k73_gamma_sets(k)
        if len(D) != 7 * k:
            failures.append(("size", k, len(D)))
        if not certify.is_k_tuple_dominating(params, D, k):
            failures.append(("dominating", k))
        if not certify.certify_tight_domination(params, D, k):
            failures.append(("tight", k))
    solved = []
    for k, want in ((1, 7), (2, 14)):
        start = time.perf_counter()
        out = min_ktuple_dominating(params, k, budget=SOLVE_BUDGET)
        elapsed = time.perf_counter() - start
        solved.append(f"k={k}: {out.optimum} in {elapsed:.1f}s")
        if not (out.exact and out.optimum == want and elapsed <= 300.0):
            failures.append(("solve", k, out.optimum, out.exact))
    _report("2 K(7,3) sets and solves", failures, "; ".join(solved))


def test_criterion_03_k115_chain():
    params = KneserParams(11, 5)
    failures = []
    for which in (1, 2):
        S = C.steiner_4_5_11(which)
        if not certify.is_steiner_system(4, 5, 11, S):
            failures.append(("steiner", which))
        if not certify.is_perfect_1_code(params, S):
            failures.append(("perfect code", which))
    rho = bounds.packing_value(11, 5)
    if not (rho.exact and rho.value == 66):
        failures.append(("rho", rho.lower, rho.upper))
    for k in range(1, 8):
        D = C.k115_gamma_sets(k)
        if len(D) != 66 * k:
            failures.append(("size", k, len(D)))
        if not certify.is_k_tuple_dominating(params, D, k):
            failures.append(("dominating", k))
        if k * rho.lower != len(D):
            failures.append(("lower bound", k))
        value = bounds.gamma_value(11, 5, k)
        if not (value.exact and value.value == 66 * k):
            failures.append(("gamma_value", k, value.lower, value.upper))
    _report("3 K(11,5) certificate chain", failures, "k=1..7 certified at 66k")


def test_criterion_04_k_plus_r_frontier():
    failures, solved = [], []
    for r in (2, 3):
        for k in range(2, 6):
            n = r * (k + r)
            value = bounds.gamma_value(n, r, k)
            if not (value.exact and value.value == k + r):
                failures.append(("gamma_value", n, r, k, value.lower, value.upper))
            below = n - 1
            if comb(below, r) <= 120:
                out = min_ktuple_dominating(KneserParams(below, r), k, budget=SOLVE_BUDGET)
                solved.append(f"K({below},{r}) k={k}: {out.optimum}")
                if not (out.exact and out.optimum > k + r):
                    failures.append(("below", below, r, k, out.optimum, out.exact))
    _report("4 k+r frontier", failures, "; ".join(solved))


def test_criterion_05_r2_exact_region():
    failures = []
    checked = 0
    for n in range(7, 15):
        for k in range(2, 9):
            rules = [v for v, _ in bounds.exact_rules(n, 2, k) if v is not None]
            if not rules:
                continue
            value = bounds.gamma_value(n, 2, k)
            out = min_ktuple_dominating(KneserParams(n, 2), k, budget=SOLVE_BUDGET)
            checked += 1
            if not (value.exact and out.exact and out.optimum == value.value):
                failures.append((n, k, value.lower, value.upper, out.optimum, out.exact))

    out = min_ktuple_dominating(KneserParams(11, 2), 9, budget=SOLVE_BUDGET)
    if not (out.exact and out.optimum == 15 == bounds.gamma_value(11, 2, 9).value):
        failures.append(("11,2,9", out.optimum, out.exact))

    # (13, 2, 15): the solve finishes close to the budget, so the certificate
    # route carries the check and a completed solve must agree with it.
    D = C.build_k_plus_2alpha_plus1(13, 15, 3)
    value = bounds.gamma_value(13, 2, 15)
    certified = len(D) == 22 and bool(certify.is_k_tuple_dominating(D.params, D, 15))
    if not (certified and value.exact and value.value == 22):
        failures.append(("13,2,15 certificate", len(D), value.lower, value.upper))
    out = min_ktuple_dominating(KneserParams(13, 2), 15, budget=SOLVE_BUDGET)
    route = "solved" if out.exact else "certified (solve over budget)"
    if out.exact and out.optimum != 22:
        failures.append(("13,2,15 solve", out.optimum))
    _report(
        "5 r=2 exact region",
        failures,
        f"{checked} cells match; (11,2,9)=15 solved; (13,2,15)=22 {route}",
    )


def test_criterion_06_alpha_constructions():
    failures = []
    plain = 0
    for alpha in range(2, 6):
        for n in range(alpha + 2, 27):
            for k in range(1, (alpha * n - 4 * alpha) // 2 + 1):
                D = C.build_k_plus_2alpha(n, k, alpha)
                plain += 1
                if len(D) != k + 2 * alpha or not certify.is_k_tuple_dominating_r2(D.params, D, k):
                    failures.append(("k+2a", n, k, alpha))

    plus_one = 0
    cases: set[str] = set()
    residues: dict[int, set[int]] = {alpha: set() for alpha in range(2, 6)}
    for alpha in range(2, 6):
        k = 1
        while (n := -(-2 * k // alpha) + 3) <= 26:
            if n >= 2 * alpha + 3:
                D = C.build_k_plus_2alpha_plus1(n, k, alpha)
                split = C.AlphaParams.split(k, alpha)
                cases.add(split.case)
                residues[alpha].add(split.b)
                plus_one += 1
                ok = len(D) == k + 2 * alpha + 1
                ok = ok and certify.is_k_tuple_dominating_r2(D.params, D, k)
                ok = ok and certify.is_k_tuple_dominating(D.params, D, k)
                if not ok:
                    failures.append(("k+2a+1", n, k, alpha))
            k += 1
    for alpha, seen in residues.items():
        if seen != set(range(alpha)):
            failures.append(("residues", alpha, sorted(seen)))
    all_cases = {"b=0", "1<=b<a", "b=a,even", "b=a,odd", "a<b,even", "a<b,odd"}
    if cases != all_cases:
        failures.append(("cases", sorted(all_cases - cases)))
    _report(
        "6 alpha constructions",
        failures,
        f"{plain} k+2a sets, {plus_one} k+2a+1 sets, {len(cases)} cases",
    )


def test_criterion_07_oracle_equivalence():
    failures = []
    checked = 0
    for n, r in ((4, 2), (5, 2), (6, 2), (6, 3)):
        params = KneserParams(n, r)
        for k in range(1, params.degree() + 2):
            fast = min_ktuple_dominating(params, k, budget=SOLVE_BUDGET)
            slow = brute_force_min(params, k)
            checked += 1
            if not (fast.exact and fast.optimum == slow.optimum):
                failures.append((n, r, k, fast.optimum, slow.optimum))
    _report("7 oracle equivalence", failures, f"{checked} instances")


# -- property suites --------------------------------------------------------------

_PROPERTY_SETTINGS = settings(
    max_examples=PROPERTY_CASES,
    database=None,
    deadline=None,
    phases=[Phase.generate],
    suppress_health_check=list(HealthCheck),
)


def _relabel(v: int, perm: list[int]) -> int:
    return make_vertex(perm[x - 1] for x in elements(v))


def _min_count(params: KneserParams, D) -> int:
    return min(certify.neighborhood_counts(params, D).values())


@st.composite
def _r2_instances(draw):
    n = draw(st.integers(5, 10))
    params = KneserParams(n, 2)
    verts = enumerate_vertices(params)
    bits = draw(st.integers(0, (1 << len(verts)) - 1))
    if draw(st.booleans()):
        bits |= draw(st.integers(0, (1 << len(verts)) - 1))
    D = [v for j, v in enumerate(verts) if bits >> j & 1]
    k = draw(st.integers(1, params.degree() + 1))
    return params, D, k


@st.composite
def _lift_instances(draw):
    r, n = draw(st.sampled_from([(2, 5), (2, 6), (2, 7), (2, 8), (2, 9), (3, 7)]))
    params = KneserParams(n, r)
    verts = enumerate_vertices(params)
    if draw(st.booleans()):
        drop = draw(st.sets(st.sampled_from(verts), max_size=params.degree() - 1))
        D = [v for v in verts if v not in drop]
    else:
        bits = draw(st.integers(0, (1 << len(verts)) - 1))
        bits |= draw(st.integers(0, (1 << len(verts)) - 1))
        D = [v for j, v in enumerate(verts) if bits >> j & 1]
    return VertexSet(params, D)


def _tight_pool() -> list[tuple[KneserParams, list[int], int]]:
    pool = []
    k73 = KneserParams(7, 3)
    for k in range(1, 6):
        pool.append((k73, list(C.k73_gamma_sets(k)), k))
    for plane in C.fano_planes():
        pool.append((k73, list(plane), 1))
    for n, r in ((5, 2), (6, 2), (7, 2), (7, 3), (9, 4)):
        params = KneserParams(n, r)
        pool.append((params, enumerate_vertices(params), params.degree() + 1))
    return pool


@st.composite
def _tight_instances(draw, pool):
    if draw(st.integers(0, 3)) == 0:
        r = draw(st.integers(2, 4))
        params = KneserParams(2 * r, r)
        full = (1 << (2 * r)) - 1
        halves = [v for v in enumerate_vertices(params) if v < full ^ v]
        D = [v if draw(st.booleans()) else full ^ v for v in halves]
        base = (params, D, 1)
    else:
        base = draw(st.sampled_from(pool))
    params, D, k = base
    perm = draw(st.permutations(range(1, params.n + 1)))
    return params, [_relabel(v, perm) for v in D], k


@st.composite
def _vertex_families(draw):
    t = draw(st.integers(2, 6))
    r = draw(st.integers(2, 4))
    n = draw(st.integers(2 * r, t * r))
    subset = st.frozensets(st.integers(1, n), min_size=r, max_size=r)
    S = draw(st.lists(subset, min_size=t, max_size=t, unique=True))
    return t, r, n, S


def test_criterion_08_property_suites():
    counts = {"r2": 0, "r2_true": 0, "lift": 0, "lift_k2": 0, "dual": 0, "union": 0, "union_hit": 0}
    failures = []

    @seed(20240501)
    @_PROPERTY_SETTINGS
    @given(_r2_instances())
    def r2_matches_direct(case):
        params, D, k = case
        fast = bool(certify.is_k_tuple_dominating_r2(params, D, k))
        direct = bool(certify.is_k_tuple_dominating(params, D, k))
        counts["r2"] += 1
        counts["r2_true"] += direct
        if fast != direct:
            failures.append(("r2", params.n, k, sorted(D)))

    @seed(20240502)
    @_PROPERTY_SETTINGS
    @given(_lift_instances())
    def lift_keeps_domination(D):
        counts["lift"] += 1
        k = _min_count(D.params, D)
        if k < 2:
            return
        counts["lift_k2"] += 1
        bigger = D.lift(D.params.n + 1)
        if _min_count(bigger.params, bigger) < k:
            failures.append(("lift", D.params.n, D.params.r, k, list(D)))

    pool = _tight_pool()

    @seed(20240503)
    @_PROPERTY_SETTINGS
    @given(_tight_instances(pool), st.randoms(use_true_random=False))
    def complement_is_tight(case, rng):
        params, D, k = case
        counts["dual"] += 1
        rest = C.complement_set(params, D)
        closed = params.degree() + 1
        if not certify.certify_tight_domination(params, D, k):
            failures.append(("tight", params.n, params.r, k))
        if not certify.certify_tight_domination(params, rest, closed - k):
            failures.append(("dual", params.n, params.r, k))
        verts = enumerate_vertices(params)
        sample = [v for v in verts if rng.random() < 0.5]
        inside = certify.neighborhood_counts(params, sample)
        outside = certify.neighborhood_counts(params, C.complement_set(params, sample))
        if any(inside[v] + outside[v] != closed for v in verts):
            failures.append(("count identity", params.n, params.r))

    @seed(20240504)
    @_PROPERTY_SETTINGS
    @given(_vertex_families())
    def union_bound(case):
        t, r, n, S = case
        counts["union"] += 1
        if not all(any(u & w for w in S if w != u) for u in S):
            return
        counts["union_hit"] += 1
        if len(frozenset().union(*S)) > t * r - -(-t // 2):
            failures.append(("union", t, r, n, [sorted(s) for s in S]))

    r2_matches_direct()
    lift_keeps_domination()
    complement_is_tight()
    union_bound()
    enough = all(counts[key] >= PROPERTY_CASES for key in ("r2", "lift", "dual", "union"))
    if not enough:
        failures.append(("too few cases", dict(counts)))
    detail = ", ".join(f"{key}={value}" for key, value in counts.items())
    _report("8 property suites", failures, detail)


def test_criterion_09_lp_golden():
    text = export_lp(KneserParams(5, 2), 2)
    golden = (GOLDEN / "k5_2_k2.lp").read_bytes()
    failures = [] if text.encode() == golden else ["LP text differs from golden file"]
    _report("9 LP golden", failures, f"{len(golden)} bytes")


def test_criterion_10_large_k():
    failures, notes = [], []
    for t in range(3):
        threshold = bounds.large_k_threshold(2, t)
        for n in range(threshold, threshold + 4):
            params = KneserParams(n, 2)
            k = comb(n - 2, 2) - t
            size = comb(n, 2) - (t + 1)
            D = C.large_k_complement(n, 2, t)
            if len(D) != size or not certify.is_k_tuple_dominating(params, D, k):
                failures.append(("complement", n, t))
            value = bounds.gamma_value(n, 2, k)
            if not (value.exact and value.value == size):
                failures.append(("gamma_value", n, t, value.lower, value.upper))
            if comb(n, 2) <= 20:
                brute = brute_force_min(params, k).optimum
                notes.append(f"brute K({n},2) k={k}: {brute}")
                if brute != size:
                    failures.append(("brute", n, t, brute))
        below = C.boundary_threshold(2, t)
        params = KneserParams(below, 2)
        k = comb(below - 2, 2) - t
        S = C.boundary_family_S(below, 2, t)
        rest = C.complement_set(params, S)
        if len(rest) >= comb(below, 2) - (t + 1) or not certify.is_k_tuple_dominating(params, rest, k):
            failures.append(("boundary", below, t, len(rest)))
        if comb(below, 2) <= 20:
            brute = brute_force_min(params, k).optimum
            notes.append(f"brute K({below},2) k={k}: {brute}")
            if brute is None or brute > len(rest):
                failures.append(("boundary brute", below, t, brute))
    _report("10 large-k threshold", failures, "; ".join(notes))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
