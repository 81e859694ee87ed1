"""Parity of #Sha for the abelian surfaces (E_{d1} x E_{d2}) / (Z/5).

The modules build up as follows: ``arith`` (factoring, Q(S,5), GF(5)
ranks), ``cyclo`` (Q(zeta_5) arithmetic and K(S,5)), ``curve`` and
``isogeny`` (the Tate normal form family and its 5-isogeny), ``search`` and
``lseries`` (Mordell-Weil data), ``descent`` (per-curve cokernel bases) and
``pipeline`` (pairs, statistics, file formats).
"""
from .arith import QS5Vector, f5_rank, factorize, qs5_class
from .curve import curve_from_uv, integral_model, reduction_data, tate_normal_model
from .cyclo import CycloElement, KS5Vector, ks5_class, prime_generators, unit_class
from .descent import CurveRecord, SearchPolicy, build_curve_record, saturate_at_5
from .isogeny import isogeny_data
from .pipeline import (
    PairResult,
    StatsReport,
    analyze_pairs,
    build_database,
    curve_parameters,
    local_only,
    pair_analysis,
    step0_tables,
)

__version__ = "0.1.0"

__all__ = [
    "CurveRecord", "CycloElement", "KS5Vector", "PairResult", "QS5Vector", "SearchPolicy", "StatsReport",
    "analyze_pairs", "build_curve_record", "build_database", "curve_from_uv", "curve_parameters", "f5_rank",
    "factorize", "integral_model", "isogeny_data", "ks5_class", "local_only", "pair_analysis",
    "prime_generators", "qs5_class", "reduction_data", "saturate_at_5", "step0_tables",
    "tate_normal_model", "unit_class",
]
