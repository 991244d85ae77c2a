"""Bit-packed GF(2) rank kernel for the Monte Carlo hot loop.

Columns of a binary matrix are packed 64 rows per uint64 word.  A trial
offers a sequence of columns to an echelon basis keyed by the global bit
position of each leading 1; a column is novel iff it does not reduce to
zero.  Basis rows lead at their pivot bit, so reduction only ever touches
words up to the pivot word.

This mirrors linalg.RankTracker over GF(2); the two are cross-checked in
the tests.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = ["pack_columns", "run_selection_trials"]


def pack_columns(bits: np.ndarray) -> np.ndarray:
    """Pack a (k, n) 0/1 matrix into (n, nwords) uint64, LSB-first."""
    kbits, ncols = bits.shape
    nwords = (kbits + 63) // 64
    out = np.zeros((ncols, nwords), dtype=np.uint64)
    for w in range(nwords):
        chunk = bits[w * 64:(w + 1) * 64]
        for b in range(chunk.shape[0]):
            out[:, w] |= chunk[b].astype(np.uint64) << np.uint64(b)
    return out


@njit(cache=True)
def _msb64(x):
    p = 0
    if x >> np.uint64(32):
        x >>= np.uint64(32)
        p += 32
    if x >> np.uint64(16):
        x >>= np.uint64(16)
        p += 16
    if x >> np.uint64(8):
        x >>= np.uint64(8)
        p += 8
    if x >> np.uint64(4):
        x >>= np.uint64(4)
        p += 4
    if x >> np.uint64(2):
        x >>= np.uint64(2)
        p += 2
    if x >> np.uint64(1):
        p += 1
    return p


@njit(cache=True)
def _offer(basis, has_pivot, vec, nwords):
    """Reduce vec against the basis; insert and return True if novel."""
    w = nwords - 1
    while w >= 0:
        x = vec[w]
        if x == np.uint64(0):
            w -= 1
            continue
        p = (w << 6) + _msb64(x)
        if not has_pivot[p]:
            has_pivot[p] = True
            for t in range(w + 1):
                basis[p, t] = vec[t]
            return True
        # basis row p leads at bit p: XOR clears it, touching words <= w
        for t in range(w + 1):
            vec[t] ^= basis[p, t]
    return False


@njit(cache=True)
def run_selection_trials(cols, sel, kbits, early_abort):
    """Rank statistics for many trials of offered column sequences.

    cols: (total_cols, nwords) packed columns, shared across trials.
    sel: (trials, count) indices into cols, offered left to right.
    Returns (ranks, full_steps); full_steps[t] is the 1-based offer index
    at which the span first reached kbits, or -1.  With early_abort, a
    trial stops once full rank is unreachable, so its rank entry is only a
    lower bound (its success verdict is still exact).
    """
    trials, count = sel.shape
    nwords = cols.shape[1]
    ranks = np.zeros(trials, dtype=np.int32)
    full_steps = np.full(trials, -1, dtype=np.int32)
    basis = np.zeros((kbits, nwords), dtype=np.uint64)
    has_pivot = np.zeros(kbits, dtype=np.bool_)
    vec = np.zeros(nwords, dtype=np.uint64)
    for t in range(trials):
        basis[:] = np.uint64(0)
        has_pivot[:] = False
        r = 0
        for i in range(count):
            ci = sel[t, i]
            for w in range(nwords):
                vec[w] = cols[ci, w]
            if _offer(basis, has_pivot, vec, nwords):
                r += 1
                if r == kbits:
                    full_steps[t] = i + 1
                    break
            elif early_abort and r + (count - i - 1) < kbits:
                break
        ranks[t] = r
    return ranks, full_steps
