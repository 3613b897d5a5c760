"""Value engine for γ×k(n, r) and ρ(n, r).

Closed-form rules are tried first.  When none applies the engine reports the
tightest interval it can justify, combining local lower/upper bounds across
ground-set sizes by monotonicity in n (valid for k >= 2).  Each value carries
the tags of the rules that produced it.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from pathlib import Path

from . import certify
from .core import MAX_N, KneserError, KneserParams, VertexSet, colex_subsets
from .formats import from_json_obj, to_json_obj

INFEASIBLE = "INFEASIBLE"
R1 = "R1"
N_EQ_2R = "N_EQ_2R"
FULL = "FULL"
COR_LARGE_K = "COR_LARGE_K"
THM_K_PLUS_R = "THM_K_PLUS_R"
THM_DOM_BIG_N = "THM_DOM_BIG_N"
DOM_N2 = "DOM_N2"
THM_N2_K3 = "THM_N2_K3"
THM_B1 = "THM_B1"
THM_B2 = "THM_B2"
PROP_PART_1 = "PROP_PART_1"
PROP_PART_2 = "PROP_PART_2"
ODD_7_3 = "ODD_7_3"
ODD_11_5 = "ODD_11_5"

TRIVIAL_LB = "TRIVIAL_LB"
COR_K_PLUS_R = "COR_K_PLUS_R"
N2_K3_LB = "N2_K3_LB"
PACKING_LB = "PACKING_LB"
PAIR_SUM_LB = "PAIR_SUM_LB"
MONOTONE_LB = "MONOTONE_LB"

ALL_VERTICES_UB = "ALL_VERTICES_UB"
COMPLEMENT_UB = "COMPLEMENT_UB"
PACKING_UB = "PACKING_UB"
CONSTRUCTION_UB = "CONSTRUCTION_UB"
CACHE_UB = "CACHE_UB"
MONOTONE_UB = "MONOTONE_UB"

PACKING_DIAMETER_2 = "PACKING_DIAMETER_2"
PACKING_MATCHING = "PACKING_MATCHING"
PACKING_3R_MINUS_2 = "PACKING_3R_MINUS_2"
PACKING_PERFECT_CODE = "PACKING_PERFECT_CODE"
INTERSECTION_UB = "INTERSECTION_UB"
SPHERE_UB = "SPHERE_UB"
GREEDY_LB = "GREEDY_LB"
CACHE_LB = "CACHE_LB"

CACHE_ENV = "KNESER_CACHE_DIR"
GREEDY_PACKING_CAP = 5000


class InconsistentRulesError(AssertionError):
    """Two closed-form rules disagree, or a rule leaves its own bound interval."""


@dataclass(frozen=True)
class ValueReport:
    n: int
    r: int
    k: int | None
    lower: int | None
    upper: int | None
    provenance: tuple[str, ...]

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def feasible(self) -> bool:
        return INFEASIBLE not in self.provenance

    @property
    def value(self) -> int | None:
        return self.lower if self.exact else None

    def contains(self, x: int) -> bool:
        return self.feasible and self.lower <= x <= self.upper

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "provenance": list(self.provenance),
        }


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _validate(n: int, r: int, k: int | None) -> None:
    KneserParams(n, r)
    if r >= 2 and n < 2 * r:
        raise KneserError(f"K({n},{r}) has no edges; need n >= 2r")
    if k is not None and k < 1:
        raise KneserError("k must be at least 1")


def large_k_threshold(r: int, t: int) -> int:
    return (t + 3) * r - _ceil_div(t + 2, 2)


def ceiling_alpha_window(n: int, k: int) -> bool:
    """The (n, k) range on which the alpha = ceil(2k/(n-3)) closed form applies."""
    if n < 7:
        return False
    a = n - 4 if n % 2 == 0 else n - 6 + n % 4
    return n - 3 < 2 * k and 4 * k <= a * (n - 3)


def alpha_rules(n: int, k: int) -> list[tuple[int, str, int]]:
    """(value, tag, alpha) for every alpha whose two-branch closed form applies to K(n, 2)."""
    out = []
    alpha = 2
    while 2 * alpha + 3 <= n:
        if n >= 2 * alpha + 3 + alpha % 2:
            if alpha * n >= 2 * k + 4 * alpha and (alpha - 1) * n < 2 * k + 3 * (alpha - 1):
                out.append((k + 2 * alpha, THM_B1, alpha))
            if n == _ceil_div(2 * k, alpha) + 3:
                out.append((k + 2 * alpha + 1, THM_B2, alpha))
        alpha += 1
    return out


def exact_rules(n: int, r: int, k: int) -> list[tuple[int | None, str]]:
    """Every closed form that applies, as (value, tag); value None means infeasible."""
    _validate(n, r, k)
    found: list[tuple[int | None, str]] = []
    if r == 1:
        found.append((k, R1) if k <= n else (None, INFEASIBLE))
        return found
    delta = comb(n - r, r)
    total = comb(n, r)
    if k > delta + 1:
        return [(None, INFEASIBLE)]
    if k == delta + 1:
        found.append((total, FULL))
    if n == 2 * r:
        if k == 1:
            found.append((total // 2, N_EQ_2R))
        return found
    t = delta - k
    if t >= 0 and n >= large_k_threshold(r, t):
        found.append((total - (t + 1), COR_LARGE_K))
    if k >= 2 and n >= r * (k + r):
        found.append((k + r, THM_K_PLUS_R))
    if k == 1 and n >= r * r + r:
        found.append((r + 1, THM_DOM_BIG_N))
    if r == 2:
        if k == 1:
            found.append((3, DOM_N2))
        if k >= 2 and n == 2 * k + 3:
            found.append((k + 3, THM_N2_K3))
        found.extend((v, tag) for v, tag, _ in alpha_rules(n, k))
        if n >= 5 and k == comb(n - 3, 2) + 1:
            found.append((comb(n - 1, 2), PROP_PART_2))
        if 6 <= n <= 10 and k == comb(n - 4, 2) + 2:
            found.append((comb(n - 2, 2) + 1, PROP_PART_1))
    if (n, r) == (7, 3) and k <= 5:
        found.append((7 * k, ODD_7_3))
    if (n, r) == (11, 5) and k <= 7:
        found.append((66 * k, ODD_11_5))
    return found


def _agreed(found, where) -> tuple[int | None, tuple[str, ...]] | None:
    if not found:
        return None
    values = {v for v, _ in found}
    if len(values) != 1:
        raise InconsistentRulesError(f"closed forms disagree at {where}: {found}")
    return values.pop(), tuple(tag for _, tag in found)


# -- witness cache --------------------------------------------------------------


def cache_dir() -> Path | None:
    raw = os.environ.get(CACHE_ENV)
    return Path(raw) if raw else None


def _cache_path(root: Path, n: int, r: int, k: int | None) -> Path:
    name = f"pack_n{n}_r{r}.json" if k is None else f"dom_n{n}_r{r}_k{k}.json"
    return root / name


def store_witness(D: VertexSet, k: int | None = None) -> Path | None:
    """Persist a certified witness: a k-tuple dominating set, or a 2-packing when k is None.

    Only improvements are written.  Returns the path, or None without a cache directory.
    """
    root = cache_dir()
    if root is None:
        return None
    params = D.params
    if k is None:
        if not certify.is_2_packing(params, D):
            raise KneserError("refusing to cache a set that is not a 2-packing")
    elif not certify.is_k_tuple_dominating(params, D, k):
        raise KneserError(f"refusing to cache a set that is not {k}-tuple dominating")
    root.mkdir(parents=True, exist_ok=True)
    path = _cache_path(root, params.n, params.r, k)
    old = _load_cached(str(root), params.n, params.r, k)
    if old is not None and (len(old) <= len(D) if k is not None else len(old) >= len(D)):
        return path
    obj = to_json_obj(D)
    obj["property"] = "2-packing" if k is None else "k-tuple-dominating"
    if k is not None:
        obj["k"] = k
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(obj) + "\n")
    tmp.replace(path)
    clear_caches()
    return path


@lru_cache(maxsize=4096)
def _load_cached(root: str, n: int, r: int, k: int | None) -> VertexSet | None:
    path = _cache_path(Path(root), n, r, k)
    try:
        obj = json.loads(path.read_text())
        D = from_json_obj(obj)
    except (OSError, ValueError):
        return None
    if D.params != KneserParams(n, r):
        return None
    ok = certify.is_2_packing(D.params, D) if k is None else certify.is_k_tuple_dominating(D.params, D, k)
    return D if ok else None


def cached_witness(n: int, r: int, k: int | None) -> VertexSet | None:
    root = cache_dir()
    return None if root is None else _load_cached(str(root), n, r, k)


def clear_caches() -> None:
    _load_cached.cache_clear()
    _packing_cached.cache_clear()
    _local_bounds.cache_clear()


# -- packing ----------------------------------------------------------------------


def _greedy_packing(params: KneserParams) -> list[int]:
    chosen: list[int] = []
    for v in colex_subsets(params.n, params.r):
        if all(not certify.closed_neighborhoods_meet(params, u, v) for u in chosen):
            chosen.append(v)
    return chosen


def packing_value(n: int, r: int) -> ValueReport:
    """Exact ρ(n, r) where a closed form applies, else an interval."""
    _validate(n, r, None)
    return _packing_cached(n, r, str(cache_dir()))


@lru_cache(maxsize=4096)
def _packing_cached(n: int, r: int, _root: str) -> ValueReport:
    total = comb(n, r)
    found = []
    if n >= 3 * r - 1:
        found.append((1, PACKING_DIAMETER_2))
    if n == 2 * r:
        found.append((total // 2, PACKING_MATCHING))
    if n == 3 * r - 2 and r >= 3:
        found.append(({3: 7, 4: 5}.get(r, 3), PACKING_3R_MINUS_2))
    if n == 2 * r + 1 and r in (3, 5):
        found.append((total // (r + 2), PACKING_PERFECT_CODE))
    hit = _agreed(found, f"rho({n},{r})")
    if hit is not None:
        return ValueReport(n, r, None, hit[0], hit[0], hit[1])

    s = 3 * r - 1 - n
    uppers = [
        (min(comb(n, s), sum(comb(n - 1, i) for i in range(s + 1))), INTERSECTION_UB),
        (total // (comb(n - r, r) + 1), SPHERE_UB),
    ]
    lowers = [(1, GREEDY_LB)]
    if total <= GREEDY_PACKING_CAP:
        lowers.append((len(_greedy_packing(KneserParams(n, r))), GREEDY_LB))
    cached = cached_witness(n, r, None)
    if cached is not None:
        lowers.append((len(cached), CACHE_LB))
    return _combine(n, r, None, lowers, uppers)


def _best(cands, pick):
    value = pick(v for v, _ in cands)
    tags = []
    for v, tag in cands:
        if v == value and tag not in tags:
            tags.append(tag)
    return value, tags


def _combine(n, r, k, lowers, uppers) -> ValueReport:
    lo, lo_tags = _best(lowers, max)
    hi, hi_tags = _best(uppers, min)
    if lo > hi:
        raise InconsistentRulesError(f"empty interval [{lo}, {hi}] at n={n}, r={r}, k={k}")
    tags = lo_tags + [t for t in hi_tags if t not in lo_tags]
    return ValueReport(n, r, k, lo, hi, tuple(tags))


# -- k-tuple domination -----------------------------------------------------------


def _pair_sum_lower(n: int, k: int) -> int:
    """Lower bounds on γ×k(n, 2) from the occurrence-sum constraints at each alpha."""
    best = 0
    alpha = 2
    while 2 * alpha + 3 <= n:
        if n >= 2 * alpha + 3 + alpha % 2:
            if alpha * n < 2 * k + 4 * alpha:
                best = max(best, k + 2 * alpha + 1)
            if (alpha - 1) * n < 2 * k + 3 * (alpha - 1):
                best = max(best, k + 2 * alpha)
        alpha += 1
    return best


def _construction_upper(n: int, k: int) -> int | None:
    """Sizes of the K(n, 2) builders that apply directly at n."""
    best = None
    alpha = 2
    while alpha + 2 <= n:
        if alpha * n >= 2 * k + 4 * alpha:
            size = k + 2 * alpha
            best = size if best is None else min(best, size)
            break
        alpha += 1
    alpha = 2
    while 2 * alpha + 3 <= n:
        if n == _ceil_div(2 * k, alpha) + 3:
            size = k + 2 * alpha + 1
            best = size if best is None else min(best, size)
        alpha += 1
    if k >= 2 and n == 2 * k + 3:
        best = k + 3 if best is None else min(best, k + 3)
    return best


@lru_cache(maxsize=65536)
def _local_bounds(n: int, r: int, k: int, _root: str):
    """(exact hit or None, lowers, uppers) using only facts about K(n, r) itself."""
    hit = _agreed(exact_rules(n, r, k), f"gamma({n},{r},{k})")
    if hit is not None and hit[0] is None:
        return hit, [], []
    total = comb(n, r)
    delta = comb(n - r, r)
    lowers = [(k, TRIVIAL_LB)]
    uppers = [(total, ALL_VERTICES_UB)]
    if r >= 2:
        uppers.append((total - (delta + 1 - k), COMPLEMENT_UB))
        if k >= 2:
            lowers.append((k + r + (1 if n < r * (k + r) else 0), COR_K_PLUS_R))
        rho = packing_value(n, r)
        lowers.append((k * rho.lower, PACKING_LB))
        if k <= delta:
            uppers.append((total - rho.lower, PACKING_UB))
        if r == 2 and n >= 5:
            if k >= 2 and n <= 2 * k + 2:
                lowers.append((k + 4, N2_K3_LB))
            lb = _pair_sum_lower(n, k)
            if lb:
                lowers.append((lb, PAIR_SUM_LB))
            ub = _construction_upper(n, k)
            if ub is not None:
                uppers.append((ub, CONSTRUCTION_UB))
    cached = cached_witness(n, r, k)
    if cached is not None:
        uppers.append((len(cached), CACHE_UB))
    return hit, lowers, uppers


def gamma_value(n: int, r: int, k: int) -> ValueReport:
    """γ×k(n, r): exact when a closed form or the bound interval pins it, else [lower, upper]."""
    _validate(n, r, k)
    root = str(cache_dir())
    hit, lowers, uppers = _local_bounds(n, r, k, root)
    if hit is not None and hit[0] is None:
        return ValueReport(n, r, k, None, None, (INFEASIBLE,))
    lowers = list(lowers)
    uppers = list(uppers)
    if r >= 2 and k >= 2 and n > 2 * r:
        for m in range(2 * r + 1, n):
            if k > comb(m - r, r) + 1:
                continue
            h, _, ups = _local_bounds(m, r, k, root)
            if h is not None:
                uppers.append((h[0], MONOTONE_UB))
            else:
                uppers.append((min(v for v, _ in ups), MONOTONE_UB))
        for m in range(n + 1, min(r * (k + r), MAX_N) + 1):
            h, lows, _ = _local_bounds(m, r, k, root)
            if h is not None:
                lowers.append((h[0], MONOTONE_LB))
            else:
                lowers.append((max(v for v, _ in lows), MONOTONE_LB))
    report = _combine(n, r, k, lowers, uppers)
    if hit is None:
        return report
    value, tags = hit
    if not report.lower <= value <= report.upper:
        raise InconsistentRulesError(
            f"closed form {value} ({', '.join(tags)}) outside [{report.lower}, {report.upper}] "
            f"at n={n}, r={r}, k={k}"
        )
    return ValueReport(n, r, k, value, value, tags)
