"""Exact analysis of round-robin collection from staggered random sources.

S sources each hold the same n symbols and transmit them in independent
uniformly random orders, interleaved round robin: transmission step
ell = 0, 1, 2, ... is served by source ell mod S, which by then has
n - floor(ell/S) symbols left unsent.  U_ell is the number of symbols the
receiver has not yet seen after ell transmissions.  U is a Markov chain:
the step-ell transmission reveals a new symbol with probability

    i / (n - floor(ell/S))    when U_ell = i,

because conditioned on the history, the i missing symbols are equally
likely to occupy any of the active source's unsent slots.  Everything
here evolves that chain, either in floats or in exact rationals.

The scaling limit for n -> infinity at normalized time tau = ell/n keeps
a fraction u_S(tau) = (1 - tau/S)^S of symbols unseen; inverting at the
code rate R = k/n gives the normalized completion time and the storage /
delay tradeoff delta(sigma) = sigma * tau_tilde(1/sigma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "ChainSpec",
    "StepPmf",
    "CompletionPmf",
    "transition_prob",
    "evolve_pmf",
    "expected_unseen",
    "asymptotic_unseen",
    "completion_pmf",
    "expected_completion",
    "asymptotic_completion",
    "tradeoff",
    "finite_tradeoff",
]


@dataclass(frozen=True)
class ChainSpec:
    """Parameters of the collection process.

    n: symbols per source; systems: number of interleaved sources;
    k: symbols needed for completion (optional until completion is asked).
    """

    n: int
    systems: int
    k: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.systems < 1:
            raise ValueError("systems must be at least 1")
        if self.k is not None and not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}")

    @property
    def total_steps(self) -> int:
        return self.n * self.systems

    def _need_k(self) -> int:
        if self.k is None:
            raise ValueError("this quantity needs k in the ChainSpec")
        return self.k


@dataclass(frozen=True)
class StepPmf:
    """Distribution of U_step over {0, ..., n} (index = unseen count)."""

    step: int
    probs: tuple

    def __post_init__(self):
        total = sum(self.probs)
        if isinstance(total, Fraction):
            ok = total == 1
        else:
            ok = math.isclose(total, 1.0, abs_tol=1e-9)
        if not ok or any(p < 0 for p in self.probs):
            raise ValueError(f"step {self.step}: probabilities do not form a pmf")

    def mean(self) -> float:
        return float(sum(i * p for i, p in enumerate(self.probs)))


@dataclass(frozen=True)
class CompletionPmf:
    """Distribution of the completion time L (index = transmissions)."""

    spec: ChainSpec
    probs: tuple

    def __post_init__(self):
        total = sum(self.probs)
        if isinstance(total, Fraction):
            ok = total == 1
        else:
            ok = math.isclose(total, 1.0, abs_tol=1e-9)
        if not ok or any(p < 0 for p in self.probs):
            raise ValueError("completion probabilities do not form a pmf")

    def mean(self) -> float:
        return float(sum(ell * p for ell, p in enumerate(self.probs)))


def _unsent(spec: ChainSpec, ell: int) -> int:
    return spec.n - ell // spec.systems


def transition_prob(i: int, ell: int, spec: ChainSpec) -> tuple:
    """(P[next transmission is novel], P[it is redundant]) from U_ell = i.

    Requires the active source to still hold unsent symbols and the state
    to be reachable: 0 <= i <= n - floor(ell/S).
    """
    if not 0 <= ell < spec.total_steps:
        raise ValueError(f"step {ell} out of range: active source is exhausted")
    denom = _unsent(spec, ell)
    if not 0 <= i <= denom:
        raise ValueError(f"state {i} unreachable at step {ell} (at most {denom})")
    p = Fraction(i, denom)
    return p, 1 - p


def _evolution(spec: ChainSpec, exact: bool):
    """Yield (step, probs) for U_0 .. U_{S n}; probs indexed by unseen count."""
    n = spec.n
    if exact:
        probs = [Fraction(0)] * (n + 1)
        probs[n] = Fraction(1)
    else:
        probs = np.zeros(n + 1)
        probs[n] = 1.0
    yield 0, probs
    for ell in range(spec.total_steps):
        denom = _unsent(spec, ell)
        if exact:
            # states above denom hold no mass, so they stay exactly zero
            nxt = [Fraction(0)] * (n + 1)
            for i in range(min(n, denom) + 1):
                term = probs[i] * Fraction(denom - i, denom)
                if i < n:
                    term += probs[i + 1] * Fraction(i + 1, denom)
                nxt[i] = term
        else:
            i = np.arange(n + 1)
            stay = probs * np.where(i <= denom, (denom - i) / denom, 0.0)
            drop = np.zeros(n + 1)
            drop[:n] = probs[1:] * (np.arange(1, n + 1) / denom)
            nxt = stay + drop
        probs = nxt
        yield ell + 1, probs


def evolve_pmf(spec: ChainSpec, exact: bool = False) -> list[StepPmf]:
    """Exact pmf of U_ell for every step ell = 0 .. S*n."""
    return [
        StepPmf(step=ell, probs=tuple(probs))
        for ell, probs in _evolution(spec, exact)
    ]


def expected_unseen(ell: int, spec: ChainSpec) -> float:
    """E[U_ell] in closed form: n * prod_{j<ell} (1 - 1/(n - floor(j/S))).

    The chain's expected drop at step j is E[U_j] / (n - floor(j/S)), so
    the mean evolves by that product exactly.
    """
    if not 0 <= ell <= spec.total_steps:
        raise ValueError(f"step {ell} out of range 0..{spec.total_steps}")
    out = float(spec.n)
    for j in range(ell):
        out *= 1.0 - 1.0 / _unsent(spec, j)
    return out


def asymptotic_unseen(tau: float, systems: int) -> float:
    """Limiting unseen fraction u_S(tau) = (1 - tau/S)^S at time tau in [0, S]."""
    if systems < 1:
        raise ValueError("systems must be at least 1")
    if not 0 <= tau <= systems:
        raise ValueError(f"tau must be in [0, {systems}]")
    return (1.0 - tau / systems) ** systems


def completion_pmf(spec: ChainSpec, exact: bool = False) -> CompletionPmf:
    """Distribution of L, the transmissions needed to see k distinct symbols.

    Completion happens at step ell exactly when U_{ell-1} = n - k + 1 and
    that step reveals a novel symbol.
    """
    n = spec.n
    k = spec._need_k()
    target = n - k + 1
    zero = Fraction(0) if exact else 0.0
    out = [zero] * (spec.total_steps + 1)
    for ell, probs in _evolution(spec, exact):
        if ell == spec.total_steps:
            break
        denom = _unsent(spec, ell)
        if target <= denom:
            p = probs[target] * (
                Fraction(target, denom) if exact else target / denom
            )
            out[ell + 1] = p
    return CompletionPmf(spec=spec, probs=tuple(out))


def expected_completion(spec: ChainSpec) -> float:
    """E[L] by direct summation of the completion pmf."""
    return completion_pmf(spec).mean()


def asymptotic_completion(rate: float, systems: int) -> float:
    """Normalized completion time tau_tilde = S (1 - (1-R)^(1/S)).

    Solves u_S(tau) = 1 - R: the limiting time (in units of n) to collect
    a fraction R of the symbols from S staggered sources.
    """
    if systems < 1:
        raise ValueError("systems must be at least 1")
    if not 0 < rate <= 1:
        raise ValueError("rate must be in (0, 1]")
    return systems * (1.0 - (1.0 - rate) ** (1.0 / systems))


def tradeoff(sigma: float, systems: int) -> float:
    """Normalized delay delta at storage overhead sigma >= 1.

    Storing sigma = n/k times the content and collecting from S staggered
    sources costs delta = sigma * tau_tilde(1/sigma) transmissions per
    information symbol; delta(1) = S and delta -> 1 as sigma grows.
    """
    if sigma < 1:
        raise ValueError("sigma must be at least 1")
    return sigma * asymptotic_completion(1.0 / sigma, systems)


def finite_tradeoff(n: int, k: int, systems: int) -> tuple[float, float]:
    """(sigma, delta) of the finite chain: sigma = n/k, delta = E[L]/k."""
    spec = ChainSpec(n=n, systems=systems, k=k)
    return n / k, expected_completion(spec) / k
