"""Preference set constraint (PSC) logic programs: stable models, preference
orders over them, and embeddings of ASO programs and PP preference formulas."""

from .core import (
    ANY,
    EVEN,
    AnyFamily,
    Card,
    Chain,
    Even,
    Extensional,
    Indicator,
    Linear,
    MeasureAtom,
    NormalRule,
    Pairs,
    PreorderAtom,
    Program,
    Rank,
    Rule,
    SCAtom,
    Weights,
    atoms,
    literal_to_sc,
    normal_to_program,
    reduct,
    satisfies_closure,
    satisfies_sc,
)
from .engine import enumerate_stable, head_support, is_stable, least_model, nss_transform, tp_step
from .preference import (
    OrderMode,
    Verdict,
    compare_measure_set,
    compare_models,
    compare_preordered_set,
    pref_set,
    preferred_models,
    weak_sum,
)
from .syntax import parse_aso, parse_pp, parse_psc, serialize

__version__ = "0.1.0"
