"""Coded multi-source content delivery: analytics and simulation.

A receiver pulls the same content from several uncoordinated sources,
each streaming its stored coded symbols in an independent random order.
This package provides the pieces needed to study when the receiver can
decode: GF(2^m) arithmetic, rank tracking, Reed-Solomon / random linear /
AR4JA LDPC constructions, binary lifting onto a common block grid, an
exact Markov analysis of the same-code case, and Monte Carlo estimates
for mixed-code downloads.
"""

from .gf import GF2m, FieldElement, field
from .linalg import (
    InconsistentSystemError,
    MatrixGF,
    NotDecodableError,
    RankTracker,
    matmul,
    rank,
    solve,
)
from .codes import (
    AlistParseError,
    CodeSpec,
    ConstructionError,
    encode,
    format_alist,
    generator_from_parity,
    ldpc_from_alist,
    make_ar4ja,
    make_rln,
    make_rs,
    parse_alist,
)
from .lifting import (
    LiftedCode,
    lift_generator,
    lift_parity,
    select_blocks,
    with_block_size,
)
from .coupon import (
    ChainSpec,
    CompletionPmf,
    StepPmf,
    asymptotic_completion,
    asymptotic_unseen,
    completion_pmf,
    evolve_pmf,
    expected_completion,
    expected_unseen,
    finite_tradeoff,
    tradeoff,
    transition_prob,
)
from .delivery import (
    Mode,
    MixturePoint,
    OverheadPoint,
    SessionConfig,
    TrialResult,
    extend_mixture,
    mixture_grid,
    mixture_point,
    overhead_curve,
    run_mixed_code_trial,
    run_same_code_trial,
    same_code_completion_times,
    standard_sources,
    sweep_mixture,
)

__version__ = "0.1.0"

__all__ = [
    "GF2m", "FieldElement", "field",
    "MatrixGF", "RankTracker", "matmul", "rank", "solve",
    "NotDecodableError", "InconsistentSystemError",
    "CodeSpec", "ConstructionError", "AlistParseError",
    "encode", "make_rs", "make_rln", "make_ar4ja",
    "parse_alist", "format_alist", "ldpc_from_alist", "generator_from_parity",
    "LiftedCode", "lift_generator", "lift_parity", "select_blocks", "with_block_size",
    "ChainSpec", "StepPmf", "CompletionPmf",
    "transition_prob", "evolve_pmf", "expected_unseen", "asymptotic_unseen",
    "completion_pmf", "expected_completion", "asymptotic_completion",
    "tradeoff", "finite_tradeoff",
    "Mode", "SessionConfig", "TrialResult", "MixturePoint", "OverheadPoint",
    "run_same_code_trial", "same_code_completion_times", "run_mixed_code_trial",
    "mixture_grid", "mixture_point", "sweep_mixture", "extend_mixture",
    "overhead_curve", "standard_sources",
]
