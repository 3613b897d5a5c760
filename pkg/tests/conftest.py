"""Shared oracles.  These work on frozensets and never touch the bitmask code."""

from __future__ import annotations

from itertools import combinations

import pytest

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def oracle_vertices(n, r):
    return [frozenset(c) for c in combinations(range(1, n + 1), r)]


def oracle_counts(n, r, D):
    """|N[v] ∩ D| for every r-subset v, by direct set arithmetic."""
    D = [frozenset(d) for d in D]
    return {v: sum(1 for u in D if u == v or not (u & v)) for v in oracle_vertices(n, r)}


def oracle_is_ktuple(n, r, D, k):
    return all(c >= k for c in oracle_counts(n, r, D).values())


def oracle_min_ktuple(n, r, k):
    """Exhaustive minimum over all subsets of the vertex set, smallest size first."""
    V = oracle_vertices(n, r)
    for size in range(len(V) + 1):
        for D in combinations(V, size):
            if oracle_is_ktuple(n, r, D, k):
                return size
    return None


def as_sets(vertex_set):
    return {frozenset(row) for row in vertex_set.element_rows()}


def record_acceptance(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_RESULTS.append((criterion, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{criterion}: {status}" + (f"  {detail}" if detail else ""))


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    from kneserdom import bounds

    monkeypatch.setenv(bounds.CACHE_ENV, str(tmp_path))
    bounds.clear_caches()
    yield tmp_path
    bounds.clear_caches()
