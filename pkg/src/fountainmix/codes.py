"""Linear code construction: Reed-Solomon, random linear, and AR4JA LDPC.

A ``CodeSpec`` bundles a generator (and optionally a parity-check matrix)
with its parameters and is validated on construction: the generator must
have full row rank and must annihilate the parity check.

``make_ar4ja`` builds a member of the AR4JA protograph family (the CCSDS
experimental-standard rate ladder) by circulant lifting of the protograph
base matrix.  The circulant shift offsets are drawn from a seeded RNG
rather than copied from the standard's tables, so the code is a valid
AR4JA realization but not bit-identical to the published one.  The last
protograph variable node (the degree-6 one) is punctured: its M columns
exist in the parity-check matrix but are never transmitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf import GF2m, field
from .linalg import (
    MatrixGF,
    matmul,
    rank,
    _pack_rows,
    _rref_f2,
    _rref_generic,
)

__all__ = [
    "CodeSpec",
    "ConstructionError",
    "AlistParseError",
    "encode",
    "make_rs",
    "make_rln",
    "make_ar4ja",
    "parse_alist",
    "format_alist",
    "ldpc_from_alist",
    "generator_from_parity",
]


class ConstructionError(ValueError):
    """A code with the requested parameters cannot be built."""


class AlistParseError(ValueError):
    """Malformed alist text; the message names the offending line."""


@dataclass(frozen=True)
class CodeSpec:
    """An [n, k] linear code over GF(2^m), given by its generator matrix.

    ``n`` counts transmitted symbols.  For punctured constructions the
    parity-check relation lives in a longer ambient space; the full
    matrices and the surviving column indices are kept alongside.
    """

    kind: str
    field: GF2m
    n: int
    k: int
    generator: MatrixGF
    parity: MatrixGF | None = None
    transmitted_positions: tuple[int, ...] | None = None
    full_generator: MatrixGF | None = None
    full_parity: MatrixGF | None = None

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.generator.field != self.field:
            raise ValueError("generator field does not match code field")
        if self.generator.shape != (self.k, self.n):
            raise ValueError(
                f"generator shape {self.generator.shape} != ({self.k}, {self.n})"
            )
        if rank(self.generator) != self.k:
            raise ValueError("generator does not have full row rank")
        if self.parity is not None:
            if self.parity.field != self.field:
                raise ValueError("parity field does not match code field")
            if self.parity.shape != (self.n - self.k, self.n):
                raise ValueError(
                    f"parity shape {self.parity.shape} != ({self.n - self.k}, {self.n})"
                )
            if np.any(matmul(self.generator, self.parity.transpose()).values):
                raise ValueError("generator does not annihilate parity check")
        if self.full_generator is not None and self.full_parity is not None:
            if np.any(
                matmul(self.full_generator, self.full_parity.transpose()).values
            ):
                raise ValueError("full generator does not annihilate full parity")


def encode(code: CodeSpec, u) -> np.ndarray:
    """Encode an information vector: returns ``u @ G`` over the field."""
    u = np.asarray(u)
    if u.shape != (code.k,):
        raise ValueError(f"expected {code.k} information symbols")
    return code.generator.left_mul(u)


# --- Reed-Solomon and random linear codes ---

def make_rs(n: int, k: int, f: GF2m) -> CodeSpec:
    """[n, k] Reed-Solomon code: rows of G evaluate x^i at n distinct points.

    Any k columns of the generator are linearly independent (MDS), so any
    k received symbols decode.  Requires n <= field order.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if n > f.order:
        raise ConstructionError(
            f"RS needs n distinct evaluation points, but n={n} > {f.order}"
        )
    points = [0] + [int(f._exp[i]) for i in range(n - 1)]
    g = np.zeros((k, n), dtype=f._dtype)
    g[0] = 1  # x^0, including 0^0 = 1
    for i in range(1, k):
        g[i] = f.mul_array(g[i - 1], points)
    return CodeSpec(kind="RS", field=f, n=n, k=k, generator=MatrixGF(f, g))


def make_rln(n: int, k: int, f: GF2m, seed: int = 0) -> CodeSpec:
    """[n, k] random linear code with i.i.d. uniform generator entries.

    Resamples (deterministically in ``seed``) until the generator has full
    row rank.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    for attempt in range(64):
        rng = np.random.default_rng(np.random.SeedSequence((seed, attempt)))
        g = MatrixGF(f, rng.integers(0, f.order, size=(k, n)))
        if rank(g) == k:
            return CodeSpec(kind="RLN", field=f, n=n, k=k, generator=g)
    raise ConstructionError("could not draw a full-rank generator")  # unreachable


# --- alist I/O for sparse binary parity-check matrices ---

def parse_alist(text: str) -> MatrixGF:
    """Parse alist text into a binary parity-check matrix (checks x variables)."""
    lines = text.splitlines()

    def ints_at(idx: int) -> list[int]:
        if idx >= len(lines):
            raise AlistParseError(f"line {idx + 1}: unexpected end of input")
        try:
            return [int(tok) for tok in lines[idx].split()]
        except ValueError:
            raise AlistParseError(f"line {idx + 1}: expected integers") from None

    header = ints_at(0)
    if len(header) != 2 or header[0] <= 0 or header[1] <= 0:
        raise AlistParseError("line 1: expected two positive sizes")
    nvar, ncheck = header
    maxima = ints_at(1)
    if len(maxima) != 2:
        raise AlistParseError("line 2: expected two maximum degrees")
    col_deg = ints_at(2)
    if len(col_deg) != nvar:
        raise AlistParseError(f"line 3: expected {nvar} column degrees")
    row_deg = ints_at(3)
    if len(row_deg) != ncheck:
        raise AlistParseError(f"line 4: expected {ncheck} row degrees")
    if col_deg and max(col_deg) > maxima[0]:
        raise AlistParseError("line 3: column degree exceeds declared maximum")
    if row_deg and max(row_deg) > maxima[1]:
        raise AlistParseError("line 4: row degree exceeds declared maximum")

    h = np.zeros((ncheck, nvar), dtype=np.uint8)
    for j in range(nvar):
        lineno = 5 + j
        entries = [v for v in ints_at(lineno - 1) if v != 0]
        if len(entries) != col_deg[j]:
            raise AlistParseError(
                f"line {lineno}: column {j + 1} lists {len(entries)} checks,"
                f" degree says {col_deg[j]}"
            )
        for v in entries:
            if not 1 <= v <= ncheck:
                raise AlistParseError(f"line {lineno}: check index {v} out of range")
            if h[v - 1, j]:
                raise AlistParseError(f"line {lineno}: duplicate check index {v}")
            h[v - 1, j] = 1
    for i in range(ncheck):
        lineno = 5 + nvar + i
        entries = sorted(v for v in ints_at(lineno - 1) if v != 0)
        expect = sorted(int(j) + 1 for j in np.nonzero(h[i])[0])
        if entries != expect:
            raise AlistParseError(
                f"line {lineno}: row {i + 1} is inconsistent with the column lists"
            )
    return MatrixGF(field(1), h)


def format_alist(h: MatrixGF) -> str:
    """Render a binary matrix as alist text (rows padded with zeros)."""
    if h.field.degree != 1:
        raise ValueError("alist format is for binary matrices")
    arr = h.values
    ncheck, nvar = arr.shape
    col_deg = arr.sum(axis=0, dtype=int)
    row_deg = arr.sum(axis=1, dtype=int)
    cmax = int(col_deg.max()) if nvar else 0
    rmax = int(row_deg.max()) if ncheck else 0
    out = [
        f"{nvar} {ncheck}",
        f"{cmax} {rmax}",
        " ".join(str(d) for d in col_deg),
        " ".join(str(d) for d in row_deg),
    ]
    for j in range(nvar):
        idx = [int(i) + 1 for i in np.nonzero(arr[:, j])[0]]
        out.append(" ".join(str(v) for v in idx + [0] * (cmax - len(idx))))
    for i in range(ncheck):
        idx = [int(j) + 1 for j in np.nonzero(arr[i])[0]]
        out.append(" ".join(str(v) for v in idx + [0] * (rmax - len(idx))))
    return "\n".join(out) + "\n"


def ldpc_from_alist(text: str) -> MatrixGF:
    """Parity-check matrix from alist text."""
    return parse_alist(text)


# --- generator from parity check ---

def _unpack_int(v: int, ncols: int) -> np.ndarray:
    nbytes = (ncols + 7) // 8
    raw = np.frombuffer(v.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:ncols]

def _generator_from_parity_full(
    h: MatrixGF, transmitted_positions=None
) -> tuple[MatrixGF, list[int], np.ndarray]:
    """Full-width systematic generator, its pivot columns, and the reduced rows.

    Pivot candidates are scanned punctured-first (then right to left), so
    the information set lands in transmitted positions whenever possible;
    a conventional ``[P | I]`` parity check therefore yields ``[I | P^T]``.
    """
    f = h.field
    n = h.cols
    if transmitted_positions is None:
        transmitted = list(range(n))
    else:
        transmitted = sorted(set(int(p) for p in transmitted_positions))
        if transmitted and (transmitted[0] < 0 or transmitted[-1] >= n):
            raise ValueError("transmitted position out of range")
    tx_set = set(transmitted)
    punctured = [c for c in range(n) if c not in tx_set]
    order = punctured + [c for c in reversed(range(n)) if c in tx_set]

    if f.degree == 1:
        packed, pivots = _rref_f2(_pack_rows(h.values), order)
        red = np.stack([_unpack_int(v, n) for v in packed]) if packed else np.zeros((0, n), np.uint8)
    else:
        red, pivots = _rref_generic(f, h.values, order)

    r = len(pivots)
    k = n - r
    free = sorted(set(range(n)) - set(pivots))
    bad = [c for c in free if c not in tx_set]
    if bad:
        raise ConstructionError(
            f"information set cannot avoid punctured columns {bad}"
        )
    g = np.zeros((k, n), dtype=f._dtype)
    g[np.arange(k), free] = 1
    for i, p in enumerate(pivots):
        g[:, p] = red[i, free]
    gm = MatrixGF(f, g)
    if np.any(matmul(gm, h.transpose()).values):
        raise AssertionError("derived generator fails the parity check")
    return gm, pivots, red


def generator_from_parity(h: MatrixGF, transmitted_positions=None) -> MatrixGF:
    """Systematic generator for the code with parity-check matrix ``h``.

    The result has ``k = #variables - rank(h)`` rows.  If
    ``transmitted_positions`` is given, the generator is restricted to
    those columns; the information set is forced into them, so the
    restricted generator keeps rank k.

    Raises:
        ConstructionError: no information set avoids the punctured columns.
    """
    g_full, _, _ = _generator_from_parity_full(h, transmitted_positions)
    if transmitted_positions is None:
        return g_full
    transmitted = sorted(set(int(p) for p in transmitted_positions))
    return g_full.select_columns(transmitted)


# --- AR4JA protograph LDPC ---

# Core protograph: 3 checks x 5 variable nodes. Entries are edge counts;
# the last column is the punctured degree-6 node.
_AR4JA_CORE = np.array(
    [
        [0, 0, 1, 0, 2],
        [1, 1, 0, 1, 3],
        [1, 2, 0, 2, 1],
    ],
    dtype=np.int64,
)
# Each extension pair appends these two columns, raising the rate.
_AR4JA_PAIR = np.array(
    [
        [0, 0],
        [3, 1],
        [1, 3],
    ],
    dtype=np.int64,
)

_AR4JA_RATES = {(1, 2): 0, (2, 3): 1, (4, 5): 3}


def _ar4ja_base(rate: tuple[int, int]) -> np.ndarray:
    pairs = _AR4JA_RATES[rate]
    return np.hstack([np.tile(_AR4JA_PAIR, (1, pairs)), _AR4JA_CORE])


def _circulant_lift(base: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    """Replace entry t with an XOR of t distinct cyclic shifts of I_m."""
    rows, cols = base.shape
    h = np.zeros((rows * m, cols * m), dtype=np.uint8)
    eye = np.eye(m, dtype=np.uint8)
    for i in range(rows):
        for j in range(cols):
            t = int(base[i, j])
            if t == 0:
                continue
            shifts = rng.choice(m, size=t, replace=False)
            block = np.zeros((m, m), dtype=np.uint8)
            for s in shifts:
                block ^= np.roll(eye, int(s), axis=1)
            h[i * m:(i + 1) * m, j * m:(j + 1) * m] = block
    return h


def make_ar4ja(k: int = 1024, rate: tuple[int, int] = (4, 5), seed: int = 0) -> CodeSpec:
    """Binary AR4JA LDPC code with the last protograph node punctured.

    For rate a/(a+1) the protograph has 3 checks and ``2a + 3`` variable
    nodes, lifted by circulants of size ``M = k / 2a``; the transmitted
    block length is ``n = k (a+1)/a``.  A realization whose parity check
    loses rank, or whose information set cannot avoid the punctured
    columns, is discarded and redrawn (still deterministic in ``seed``).
    """
    rate = tuple(int(v) for v in rate)
    if rate not in _AR4JA_RATES:
        raise ConstructionError(f"unsupported rate {rate[0]}/{rate[1]}")
    pairs = _AR4JA_RATES[rate]
    div = 2 * pairs + 2
    if k % div or k // div < 8:
        raise ConstructionError(f"k must be a multiple of {div} (and >= {8 * div})")
    m = k // div
    base = _ar4ja_base(rate)
    nvn = base.shape[1]
    n_full = nvn * m
    n_tx = n_full - m
    transmitted = tuple(range(n_tx))  # punctured node lifts to the last M columns

    f2 = field(1)
    for attempt in range(32):
        rng = np.random.default_rng(np.random.SeedSequence((seed, attempt)))
        h_full = MatrixGF(f2, _circulant_lift(base, m, rng))
        try:
            g_full, pivots, red = _generator_from_parity_full(h_full, transmitted)
        except ConstructionError:
            continue
        if len(pivots) != 3 * m:
            continue  # rank-deficient realization
        # Reduced rows pivoting in punctured columns are the only ones
        # touching them, so the rest restrict to a parity check for the
        # transmitted code.
        keep = [i for i, p in enumerate(pivots) if p < n_tx]
        h_tx = red[keep][:, :n_tx]
        return CodeSpec(
            kind="LDPC",
            field=f2,
            n=n_tx,
            k=k,
            generator=g_full.select_columns(list(transmitted)),
            parity=MatrixGF(f2, h_tx),
            transmitted_positions=transmitted,
            full_generator=g_full,
            full_parity=h_full,
        )
    raise ConstructionError("no usable AR4JA realization found for this seed")
