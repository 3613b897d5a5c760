"""k-tuple domination and 2-packings in Kneser graphs K(n, r)."""

from .bounds import ValueReport, gamma_value, packing_value
from .certify import (
    CertResult,
    certify_tight_domination,
    is_2_packing,
    is_k_tuple_dominating,
    is_k_tuple_dominating_r2,
    is_perfect_1_code,
    is_steiner_system,
)
from .core import (
    CapacityError,
    KneserError,
    KneserParams,
    LevelMode,
    OccurrenceProfile,
    VertexSet,
    enumerate_vertices,
    level_sets,
    make_vertex,
    occurrence_profile,
)
from .solver import Budget, SolveOutcome, brute_force_min, export_lp, max_2_packing, min_ktuple_dominating

__all__ = [
    "Budget",
    "CapacityError",
    "CertResult",
    "KneserError",
    "KneserParams",
    "LevelMode",
    "OccurrenceProfile",
    "SolveOutcome",
    "ValueReport",
    "VertexSet",
    "brute_force_min",
    "certify_tight_domination",
    "enumerate_vertices",
    "export_lp",
    "gamma_value",
    "is_2_packing",
    "is_k_tuple_dominating",
    "is_k_tuple_dominating_r2",
    "is_perfect_1_code",
    "is_steiner_system",
    "level_sets",
    "make_vertex",
    "max_2_packing",
    "min_ktuple_dominating",
    "occurrence_profile",
    "packing_value",
]
