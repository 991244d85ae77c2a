"""Monte Carlo simulation of uncoordinated delivery from coded sources.

Two session modes:

* same-code: S sources hold identical symbols and stream them in
  independent random orders, round robin; a trial tracks how many
  transmissions it takes to see k distinct symbol indices.  This is the
  sampled counterpart of the exact chain in :mod:`fountainmix.coupon`.

* mixed-code: each source holds a (possibly different) lifted code over a
  common block grid; a trial downloads blocks per a schedule and asks
  whether the union of their binary columns reaches full rank, i.e.
  whether the content decodes.

Per-trial randomness is derived as SeedSequence((master_seed, *point_key,
trial_index)), where point_key identifies the grid point (the mixture
counts; empty for same-code runs).  Trial t is therefore reproducible in
isolation, independent of batching or execution order; the vectorized
batch paths draw exactly the same per-trial generators as the single
trial functions and are cross-checked against them in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ._gf2kernel import pack_columns, run_selection_trials
from .codes import make_ar4ja, make_rln, make_rs
from .gf import field
from .lifting import LiftedCode, lift_generator, with_block_size
from .linalg import RankTracker

__all__ = [
    "Mode",
    "SessionConfig",
    "TrialResult",
    "MixturePoint",
    "OverheadPoint",
    "run_same_code_trial",
    "same_code_completion_times",
    "run_mixed_code_trial",
    "mixture_grid",
    "mixture_point",
    "sweep_mixture",
    "extend_mixture",
    "overhead_curve",
    "standard_sources",
]


class Mode(str, Enum):
    SAME_CODE = "same-code"
    MIXED_CODE = "mixed-code"


@dataclass(frozen=True)
class SessionConfig:
    """Parameters of a delivery session.

    n and k are in transmission units: symbol indices for same-code
    sessions, blocks for mixed-code ones.  ``schedule`` is None for round
    robin streaming or a per-source download count tuple for a fixed
    mixture; a fixed schedule is its own budget.  ``erasure_fraction``
    (scalar or per source) erases round(f * n) stored units up front.
    """

    mode: Mode
    n: int
    k: int
    systems: int
    schedule: tuple[int, ...] | None = None
    erasure_fraction: float | tuple[float, ...] = 0.0
    trial_count: int = 2000
    master_seed: int = 0
    budget: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.systems < 1:
            raise ValueError("systems must be at least 1")
        if self.trial_count < 1:
            raise ValueError("trial_count must be at least 1")
        fractions = self.erasures()
        if len(fractions) != self.systems or any(
            not 0 <= f < 1 for f in fractions
        ):
            raise ValueError("erasure_fraction must be per-source values in [0, 1)")
        if self.schedule is not None:
            sched = tuple(int(c) for c in self.schedule)
            object.__setattr__(self, "schedule", sched)
            if len(sched) != self.systems:
                raise ValueError("schedule must list one count per source")
            if any(c < 0 for c in sched):
                raise ValueError("schedule counts must be nonnegative")
            for c, surv in zip(sched, self.surviving()):
                if c > surv:
                    raise ValueError(
                        f"schedule count {c} exceeds the {surv} surviving units"
                    )
            if self.budget is not None and self.budget != sum(sched):
                raise ValueError("a fixed schedule is its own budget")
        if self.budget is not None and self.budget < 0:
            raise ValueError("budget must be nonnegative")

    def erasures(self) -> tuple[float, ...]:
        f = self.erasure_fraction
        if isinstance(f, (int, float)):
            return (float(f),) * self.systems
        return tuple(float(v) for v in f)

    def surviving(self) -> tuple[int, ...]:
        return tuple(self.n - round(f * self.n) for f in self.erasures())


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one delivery trial.

    completion_time counts transmission units received when the goal was
    reached (math.inf on failure); novel_count is the number of useful
    receptions: distinct indices for same-code, rank gained (in bits) for
    mixed-code.  per_source counts units received from each source.
    """

    success: bool
    completion_time: float
    novel_count: int
    per_source: tuple[int, ...]


def _trial_seed(
    master_seed: int, point_key: tuple[int, ...], trial_index: int
) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        (int(master_seed), *(int(v) for v in point_key), int(trial_index))
    )


# --- same-code sessions ---

def _same_code_orders(config: SessionConfig, trial_index: int) -> list[np.ndarray]:
    """Per-source transmission orders (surviving indices only)."""
    ss = _trial_seed(config.master_seed, (), trial_index)
    orders = []
    for child, surv in zip(ss.spawn(config.systems), config.surviving()):
        rng = np.random.default_rng(child)
        orders.append(rng.permutation(config.n)[:surv])
    return orders


def run_same_code_trial(config: SessionConfig, trial_index: int) -> TrialResult:
    """One same-code trial: stream round robin until k distinct indices."""
    if config.mode is not Mode.SAME_CODE:
        raise ValueError("config.mode must be same-code")
    orders = _same_code_orders(config, trial_index)
    budget = config.budget
    if budget is None:
        budget = sum(len(o) for o in orders)
    seen = np.zeros(config.n, dtype=bool)
    ptr = [0] * config.systems
    per_source = [0] * config.systems
    received = 0
    distinct = 0
    step = 0
    while received < budget and any(
        ptr[s] < len(orders[s]) for s in range(config.systems)
    ):
        src = step % config.systems
        step += 1
        if ptr[src] >= len(orders[src]):
            continue
        sym = orders[src][ptr[src]]
        ptr[src] += 1
        received += 1
        per_source[src] += 1
        if not seen[sym]:
            seen[sym] = True
            distinct += 1
            if distinct == config.k:
                return TrialResult(True, float(received), distinct, tuple(per_source))
    return TrialResult(False, math.inf, distinct, tuple(per_source))


def same_code_completion_times(config: SessionConfig) -> np.ndarray:
    """Completion time of every trial (math.inf where the goal was missed).

    The erasure-free full-budget case is vectorized per chunk; it draws
    the same per-trial generators as run_same_code_trial.
    """
    if config.mode is not Mode.SAME_CODE:
        raise ValueError("config.mode must be same-code")
    n, s, k = config.n, config.systems, config.k
    fast = all(f == 0.0 for f in config.erasures()) and (
        config.budget is None or config.budget >= n * s
    )
    if not fast:
        return np.array(
            [
                run_same_code_trial(config, t).completion_time
                for t in range(config.trial_count)
            ]
        )
    out = np.empty(config.trial_count)
    chunk = 4096
    steps = np.arange(n * s, dtype=np.int32)
    for lo in range(0, config.trial_count, chunk):
        hi = min(lo + chunk, config.trial_count)
        m = hi - lo
        orders = np.empty((m, s, n), dtype=np.int32)
        for t in range(m):
            for src, child in enumerate(_trial_seed(config.master_seed, (), lo + t).spawn(s)):
                orders[t, src] = np.random.default_rng(child).permutation(n)
        # step ell receives orders[:, ell % s, ell // s]
        seq = orders.transpose(0, 2, 1).reshape(m, n * s)
        first = np.full((m, n), n * s, dtype=np.int32)
        rows = np.repeat(np.arange(m, dtype=np.int64) * n, n * s)
        np.minimum.at(
            first.reshape(-1), rows + seq.reshape(-1), np.tile(steps, m)
        )
        out[lo:hi] = np.partition(first, k - 1, axis=1)[:, k - 1] + 1.0
    return out


# --- mixed-code sessions ---

def _common_grid(codes: Sequence[LiftedCode]) -> tuple[int, int, int]:
    """(dim, block_size, n_blocks) shared by all sources, or ValueError."""
    dims = {c.dim for c in codes}
    sizes = {c.block_size for c in codes}
    counts = {c.n_blocks for c in codes}
    if len(dims) != 1 or len(sizes) != 1 or len(counts) != 1:
        raise ValueError("codes must share dimension, block size and block count")
    return dims.pop(), sizes.pop(), counts.pop()


def _check_mixed(config: SessionConfig, codes: Sequence[LiftedCode]) -> tuple[int, int]:
    if config.mode is not Mode.MIXED_CODE:
        raise ValueError("config.mode must be mixed-code")
    if len(codes) != config.systems:
        raise ValueError("need one code per source")
    dim, size, blocks = _common_grid(codes)
    if config.n != blocks:
        raise ValueError(f"config.n = {config.n} but sources hold {blocks} blocks")
    if config.k * size != dim:
        raise ValueError(
            f"config.k = {config.k} blocks does not match dimension {dim}"
        )
    return dim, size


def _mixed_orders(config: SessionConfig, trial_index: int) -> list[np.ndarray]:
    """Per-source block orders for one trial (surviving blocks only)."""
    point_key = config.schedule if config.schedule is not None else ()
    ss = _trial_seed(config.master_seed, point_key, trial_index)
    orders = []
    for child, surv in zip(ss.spawn(config.systems), config.surviving()):
        rng = np.random.default_rng(child)
        orders.append(rng.permutation(config.n)[:surv])
    return orders


def run_mixed_code_trial(
    config: SessionConfig, codes: Sequence[LiftedCode], trial_index: int
) -> TrialResult:
    """One mixed-code trial via the incremental rank tracker.

    With a fixed schedule the downloads arrive source by source; under
    round robin they interleave.  Success means the offered columns span
    the full k*m binary dimensions.
    """
    dim, size = _check_mixed(config, codes)
    orders = _mixed_orders(config, trial_index)
    if config.schedule is not None:
        stream = [
            (src, b)
            for src in range(config.systems)
            for b in orders[src][: config.schedule[src]]
        ]
    else:
        budget = config.budget
        if budget is None:
            budget = sum(len(o) for o in orders)
        stream = []
        ptr = [0] * config.systems
        step = 0
        while len(stream) < budget and any(
            ptr[s] < len(orders[s]) for s in range(config.systems)
        ):
            src = step % config.systems
            step += 1
            if ptr[src] < len(orders[src]):
                stream.append((src, orders[src][ptr[src]]))
                ptr[src] += 1
    tracker = RankTracker(field(1), dim)
    per_source = [0] * config.systems
    for received, (src, blk) in enumerate(stream, start=1):
        per_source[src] += 1
        for col in codes[src].blocks[blk]:
            tracker.offer_column(codes[src].generator.column(col))
        if tracker.full():
            return TrialResult(
                True, float(received), tracker.current_rank, tuple(per_source)
            )
    return TrialResult(False, math.inf, tracker.current_rank, tuple(per_source))


@dataclass(frozen=True)
class MixturePoint:
    """Decoding success estimate for one download mixture."""

    counts: tuple[int, ...]
    trials: int
    successes: int

    @property
    def probability(self) -> float:
        return self.successes / self.trials


@dataclass(frozen=True)
class OverheadPoint:
    """Success estimate for a mixture extended by ``extra`` blocks."""

    extra: int
    counts: tuple[int, ...]
    trials: int
    successes: int

    @property
    def probability(self) -> float:
        return self.successes / self.trials


def mixture_grid(total: int, step: int, sources: int = 3) -> list[tuple[int, ...]]:
    """All compositions of ``total`` into ``sources`` multiples of ``step``.

    Ordered lexicographically (first source slowest).
    """
    if step < 1 or total % step:
        raise ValueError(f"step {step} must divide the total {total}")
    if sources < 1:
        raise ValueError("sources must be at least 1")

    def rec(remaining: int, left: int) -> list[tuple[int, ...]]:
        if left == 1:
            return [(remaining,)]
        return [
            (c, *rest)
            for c in range(0, remaining + 1, step)
            for rest in rec(remaining - c, left - 1)
        ]

    return rec(total, sources)


class _Stack:
    """Packed column bank for a set of codes on a common block grid."""

    def __init__(self, codes: Sequence[LiftedCode]):
        self.dim, self.block_size, self.n_blocks = _common_grid(codes)
        self.cols = pack_columns(
            np.hstack([c.generator.values for c in codes])
        )
        per = self.n_blocks * self.block_size
        self.col_offset = [i * per for i in range(len(codes))]


def _selection_matrix(
    stack: _Stack,
    counts: Sequence[int],
    trials: int,
    master_seed: int,
    point_key: tuple[int, ...],
) -> np.ndarray:
    """(trials, sum(counts)*block_size) column indices, source-major order."""
    size = stack.block_size
    width = sum(counts) * size
    sel = np.empty((trials, width), dtype=np.int64)
    lane = np.arange(size, dtype=np.int64)
    for t in range(trials):
        ss = _trial_seed(master_seed, point_key, t)
        parts = []
        for src, (child, c) in enumerate(zip(ss.spawn(len(counts)), counts)):
            rng = np.random.default_rng(child)
            blocks = rng.permutation(stack.n_blocks)[:c]
            parts.append(
                (stack.col_offset[src] + blocks[:, None] * size + lane).ravel()
            )
        sel[t] = np.concatenate(parts)
    return sel


def mixture_point(
    codes: Sequence[LiftedCode],
    counts: Sequence[int],
    trials: int = 2000,
    master_seed: int = 0,
) -> MixturePoint:
    """Estimate decoding probability for one fixed download mixture."""
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(codes) or any(c < 0 for c in counts):
        raise ValueError("need one nonnegative count per source")
    stack = _Stack(codes)
    if any(c > stack.n_blocks for c in counts):
        raise ValueError("count exceeds a source's blocks")
    sel = _selection_matrix(stack, counts, trials, master_seed, counts)
    ranks, _ = run_selection_trials(stack.cols, sel, stack.dim, True)
    return MixturePoint(
        counts=counts, trials=trials, successes=int((ranks == stack.dim).sum())
    )


def sweep_mixture(
    codes: Sequence[LiftedCode],
    step: int = 8,
    trials: int = 2000,
    master_seed: int = 0,
    total: int | None = None,
) -> list[MixturePoint]:
    """Decoding probability across the whole mixture simplex.

    The grid walks every composition of ``total`` blocks (default: the
    information block count) into per-source downloads that are multiples
    of ``step``.  Each point uses its own per-trial seed stream, so any
    single point reproduces in isolation.
    """
    stack = _Stack(codes)
    if total is None:
        total = stack.dim // stack.block_size
    grid = mixture_grid(total, step, len(codes))
    out = []
    for counts in grid:
        sel = _selection_matrix(stack, counts, trials, master_seed, counts)
        ranks, _ = run_selection_trials(stack.cols, sel, stack.dim, True)
        out.append(
            MixturePoint(
                counts=counts,
                trials=trials,
                successes=int((ranks == stack.dim).sum()),
            )
        )
    return out


def extend_mixture(
    mixture: Sequence[int], extra: int, sources: int | None = None
) -> tuple[int, ...]:
    """Add ``extra`` downloads one at a time, cycling from source 0."""
    counts = [int(c) for c in mixture]
    if sources is not None and len(counts) != sources:
        raise ValueError("mixture length does not match source count")
    for e in range(extra):
        counts[e % len(counts)] += 1
    return tuple(counts)


def standard_sources(
    k_bits: int = 1024, rln_seed: int = 0, ldpc_seed: int = 0
) -> list[LiftedCode]:
    """The canonical three-source setup on a common 8-column block grid.

    Source 0 holds a random linear code and source 1 a Reed-Solomon code,
    both [5m/32, m/8] over GF(256) and lifted to binary; source 2 holds a
    rate-4/5 AR4JA LDPC code with m = k_bits information bits, its columns
    grouped in eights.  All three span k_bits binary dimensions.
    """
    if k_bits % 32:
        raise ValueError("k_bits must be a multiple of 32")
    f256 = field(8)
    k_sym = k_bits // 8
    n_sym = (k_bits // 32) * 5
    return [
        lift_generator(make_rln(n_sym, k_sym, f256, seed=rln_seed)),
        lift_generator(make_rs(n_sym, k_sym, f256)),
        with_block_size(lift_generator(make_ar4ja(k_bits, (4, 5), seed=ldpc_seed)), 8),
    ]


def overhead_curve(
    codes: Sequence[LiftedCode],
    mixture: Sequence[int],
    extra_max: int = 3,
    trials: int = 20000,
    master_seed: int = 0,
) -> list[OverheadPoint]:
    """Success probability as a base mixture gains 0..extra_max extra blocks.

    Extra downloads are assigned round robin starting at source 0, so the
    canonical (RLN, RS, LDPC) source order tops up the RLN source first.
    """
    stack = _Stack(codes)
    mixture = tuple(int(c) for c in mixture)
    out = []
    for extra in range(extra_max + 1):
        counts = extend_mixture(mixture, extra)
        if any(c > stack.n_blocks for c in counts):
            raise ValueError("extended count exceeds a source's blocks")
        sel = _selection_matrix(stack, counts, trials, master_seed, counts)
        ranks, _ = run_selection_trials(stack.cols, sel, stack.dim, True)
        out.append(
            OverheadPoint(
                extra=extra,
                counts=counts,
                trials=trials,
                successes=int((ranks == stack.dim).sum()),
            )
        )
    return out
