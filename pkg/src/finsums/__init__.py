"""Finite-sums (Hindman-type) principles at desk scale: verifiers,
strong computable reductions, brute-force witness search, and
injection-range decoders."""

from .numerics import (
    AllUpTo,
    ApartSet,
    AtMost,
    BlockSequence,
    Exactly,
    ExactlyLarge,
    ExistsPair,
    ExplicitLengths,
    FiniteSet,
    check_apart,
    digit_profile,
    encode_set,
    enumerate_sums,
    enumerate_unions,
    is_exactly_large,
    support_set,
)
from .coloring import Coloring, Rule, Table
from .principles import (
    PolarizedSets,
    PrincipleId,
    VerificationReport,
    verify_fut,
    verify_ht,
    verify_ipt,
    verify_polarized_ht,
    verify_rt,
)
from .reductions import ReductionStep, build_step, compose
from .search import (
    SearchBudget,
    SearchOutcome,
    search_apart_homogeneous,
    search_increasing_polarized,
    search_tuple_homogeneous,
    witness_number,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
