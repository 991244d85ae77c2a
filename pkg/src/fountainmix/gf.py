"""Arithmetic in the binary extension fields GF(2^m).

Field elements are Python ints in ``[0, 2^m)`` interpreted as polynomials
over GF(2): bit ``i`` of the integer is the coefficient of ``x^i``.  Addition
is bitwise XOR; multiplication is carry-less polynomial multiplication
reduced modulo an irreducible polynomial of degree ``m``.

Default reducing polynomials (all irreducible over GF(2)):

    m=1: x + 1                 0b11
    m=2: x^2 + x + 1           0b111
    m=3: x^3 + x + 1           0b1011
    m=4: x^4 + x + 1           0b10011
    m=5: x^5 + x^2 + 1         0b100101
    m=6: x^6 + x + 1           0b1000011
    m=7: x^7 + x^3 + 1         0b10001001
    m=8: x^8 + x^4 + x^3 + x^2 + 1   0x11d

Multiplication uses exp/log tables built on a primitive element found by
search, so a non-primitive reducing polynomial is handled correctly.  The
companion-matrix maps ``ivec`` and ``imat`` express elements and
multiplication maps in the basis ``1, x, ..., x^(m-1)`` over GF(2), which is
what turns a code over GF(2^m) into a binary one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["GF2m", "FieldElement", "field", "DEFAULT_POLYNOMIALS"]

DEFAULT_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,
}

_MAX_DEGREE = 16


# --- polynomial helpers over GF(2), ints as coefficient bitmasks ---

def _poly_degree(p: int) -> int:
    return p.bit_length() - 1


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _poly_mod(a: int, mod: int) -> int:
    dm = _poly_degree(mod)
    while a.bit_length() - 1 >= dm:
        a ^= mod << (a.bit_length() - 1 - dm)
    return a


def _is_irreducible(p: int) -> bool:
    d = _poly_degree(p)
    if d < 1:
        return False
    if d == 1:
        return True
    if not p & 1:  # divisible by x
        return False
    # trial division by every polynomial of degree 1..d//2
    for q in range(2, 1 << (d // 2 + 1)):
        if _poly_degree(q) >= 1 and _poly_mod(p, q) == 0:
            return False
    return True


def _prime_factors(x: int) -> list[int]:
    out = []
    f = 2
    while f * f <= x:
        if x % f == 0:
            out.append(f)
            while x % f == 0:
                x //= f
        f += 1
    if x > 1:
        out.append(x)
    return out


class GF2m:
    """The finite field GF(2^m) for a given reducing polynomial.

    Two instances compare equal iff they have the same degree and
    polynomial, so fields can be passed around freely and checked for
    compatibility.
    """

    characteristic = 2

    def __init__(self, degree: int, polynomial: int | None = None):
        if not 1 <= degree <= _MAX_DEGREE:
            raise ValueError(f"degree must be in 1..{_MAX_DEGREE}, got {degree}")
        if polynomial is None:
            if degree not in DEFAULT_POLYNOMIALS:
                raise ValueError(f"no default polynomial for degree {degree}")
            polynomial = DEFAULT_POLYNOMIALS[degree]
        if _poly_degree(polynomial) != degree:
            raise ValueError(
                f"polynomial {polynomial:#x} has degree {_poly_degree(polynomial)},"
                f" expected {degree}"
            )
        if not _is_irreducible(polynomial):
            raise ValueError(f"polynomial {polynomial:#x} is reducible over GF(2)")
        self.degree = degree
        self.polynomial = polynomial
        self.order = 1 << degree
        self._dtype = np.uint8 if degree <= 8 else np.uint16
        self._build_tables()

    # --- table construction ---

    def _mul_raw(self, a: int, b: int) -> int:
        return _poly_mod(_clmul(a, b), self.polynomial)

    def _pow_raw(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mul_raw(out, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return out

    def _find_generator(self) -> int:
        q1 = self.order - 1
        if q1 == 1:
            return 1
        factors = _prime_factors(q1)
        for g in range(2, self.order):
            if all(self._pow_raw(g, q1 // f) != 1 for f in factors):
                return g
        raise AssertionError("no primitive element found")  # unreachable

    def _build_tables(self) -> None:
        q1 = self.order - 1
        g = self._find_generator()
        exp = np.zeros(max(2 * q1, 2), dtype=self._dtype)
        log = np.zeros(self.order, dtype=np.int32)  # log[0] is a placeholder
        v = 1
        for i in range(q1):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, g)
        exp[q1:2 * q1] = exp[:q1]
        self.generator = g
        self._exp = exp
        self._log = log
        # full pairwise product table, only worthwhile for small fields
        if self.degree <= 8:
            a = np.arange(self.order)
            self._mul_table = self.mul_array(a[:, None], a[None, :])
        else:
            self._mul_table = None
        # companion-matrix table: imat_table[a] is the m x m matrix of
        # multiplication by a, columns are ivec(a * x^c)
        m = self.degree
        tbl = np.zeros((self.order, m, m), dtype=np.uint8)
        for a in range(self.order):
            v = a
            for c in range(m):
                for r in range(m):
                    tbl[a, r, c] = (v >> r) & 1
                v = self._mul_raw(v, 2)
        self._imat_table = tbl
        self._imat_table.setflags(write=False)

    # --- scalar arithmetic ---

    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        """Sum of two elements (bitwise XOR)."""
        return self._check(a) ^ self._check(b)

    def mul(self, a: int, b: int) -> int:
        """Product of two elements."""
        a = self._check(a)
        b = self._check(b)
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        """Multiplicative inverse.

        Raises:
            ZeroDivisionError: if ``a`` is zero.
        """
        a = self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return int(self._exp[self.order - 1 - self._log[a]])

    def pow(self, a: int, e: int) -> int:
        """``a`` raised to an integer power (negative allowed for a != 0)."""
        a = self._check(a)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero has no multiplicative inverse")
            return 1 if e == 0 else 0
        q1 = self.order - 1
        return int(self._exp[(self._log[a] * e) % q1])

    # --- vectorised arithmetic on integer arrays ---

    def mul_array(self, a, b) -> np.ndarray:
        """Element-wise product of integer arrays (broadcasts)."""
        a = np.asarray(a)
        b = np.asarray(b)
        prod = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod).astype(self._dtype)

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self._exp[self.order - 1 - self._log[a]].astype(self._dtype)

    # --- binary expansion maps ---

    def ivec(self, a: int) -> np.ndarray:
        """Coefficient vector of ``a`` over GF(2), lowest power first."""
        a = self._check(a)
        return (a >> np.arange(self.degree)).astype(np.uint8) & 1

    def ivec_inv(self, bits) -> int:
        """Inverse of :meth:`ivec`."""
        bits = np.asarray(bits)
        if bits.shape != (self.degree,):
            raise ValueError(f"expected {self.degree} bits, got shape {bits.shape}")
        return int(((bits.astype(np.uint64) & 1) << np.arange(self.degree, dtype=np.uint64)).sum())

    def imat(self, a: int) -> np.ndarray:
        """Multiplication-by-``a`` map as an m x m binary matrix.

        Column ``c`` is ``ivec(a * x^c)``, so ``imat(a) @ ivec(b) % 2``
        equals ``ivec(a * b)`` for every ``b``.
        """
        return self._imat_table[self._check(a)].copy()

    # --- element wrapper ---

    def element(self, value: int) -> "FieldElement":
        return FieldElement(self._check(value), self)

    def elements(self):
        """Iterate over all field elements as :class:`FieldElement`."""
        return (FieldElement(v, self) for v in range(self.order))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GF2m)
            and self.degree == other.degree
            and self.polynomial == other.polynomial
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.polynomial))

    def __repr__(self) -> str:
        return f"GF2m(degree={self.degree}, polynomial={self.polynomial:#x})"


@lru_cache(maxsize=None)
def field(degree: int, polynomial: int | None = None) -> GF2m:
    """Shared GF(2^m) instance for the given parameters."""
    return GF2m(degree, polynomial)


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific GF(2^m), with operator sugar.

    Mixing elements of different fields raises ValueError.
    """

    value: int
    field: GF2m

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise ValueError(f"{self.value} is not an element of {self.field!r}")

    def _same_field(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field!r} vs {other.field!r}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement(self.value ^ other.value, self.field)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement(
            self.field.mul(self.value, self.field.inv(other.value)), self.field
        )

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field.pow(self.value, e), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value
