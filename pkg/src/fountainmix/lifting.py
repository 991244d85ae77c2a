"""Binary image of codes over GF(2^m), in block-of-m column form.

Writing every symbol in the basis 1, x, ..., x^(m-1) turns an [n, k] code
over GF(2^m) into an [n*m, k*m] binary code whose columns come in n blocks
of m: block j is the binary image of generator column j.  Collecting whole
blocks of the binary generator is then exactly collecting symbols of the
original code, which lets codes over different fields be mixed in one
rank computation as long as they share k*m and a common block size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codes import CodeSpec
from .gf import field
from .linalg import MatrixGF, rank

__all__ = ["LiftedCode", "lift_generator", "lift_parity", "select_blocks", "with_block_size"]


@dataclass(frozen=True)
class LiftedCode:
    """Binary generator image of a code, columns grouped into blocks.

    blocks[b] lists the generator columns making up block b; blocks are
    contiguous, equal-sized, and cover every column in order.
    """

    base: CodeSpec
    generator: MatrixGF
    block_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.generator.field.degree != 1:
            raise ValueError("lifted generator must be binary")
        flat = [c for blk in self.blocks for c in blk]
        if flat != list(range(self.generator.cols)):
            raise ValueError("blocks must tile the columns in order")
        if any(len(blk) != self.block_size for blk in self.blocks):
            raise ValueError("blocks must all have the declared size")
        if rank(self.generator) != self.generator.rows:
            raise ValueError("lifted generator lost rank")

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        """Binary dimension k*m."""
        return self.generator.rows


def lift_generator(code: CodeSpec) -> LiftedCode:
    """Binary image of the generator; block j is the image of column j.

    Entry (i, j) becomes the m x m block imat(G_ij)^T so that encoding
    commutes with the expansion: ivec(u @ G) == ivec(u) @ lifted.
    For a binary code this is the identity lift with blocks of one column.
    """
    f = code.field
    m = f.degree
    k, n = code.generator.shape
    arr = f._imat_table[code.generator.values]  # (k, n, m, m)
    lifted = arr.transpose(0, 3, 1, 2).reshape(k * m, n * m)
    blocks = tuple(tuple(range(j * m, (j + 1) * m)) for j in range(n))
    return LiftedCode(
        base=code,
        generator=MatrixGF(field(1), lifted),
        block_size=m,
        blocks=blocks,
    )


def lift_parity(code: CodeSpec) -> MatrixGF:
    """Binary image of the parity check: entry (i, j) becomes imat(H_ij).

    A binary vector satisfies it iff it is the image of a codeword, so
    lifted generator and lifted parity annihilate each other.
    """
    if code.parity is None:
        raise ValueError("code has no parity-check matrix")
    f = code.field
    m = f.degree
    r, n = code.parity.shape
    arr = f._imat_table[code.parity.values]
    lifted = arr.transpose(0, 2, 1, 3).reshape(r * m, n * m)
    return MatrixGF(field(1), lifted)


def with_block_size(lifted: LiftedCode, block_size: int) -> LiftedCode:
    """Regroup the lifted columns into consecutive blocks of a new size.

    Used to put codes from different fields on a common block grid, e.g.
    grouping a binary code's columns in eights next to a GF(256) lift.
    """
    total = lifted.generator.cols
    if block_size <= 0 or total % block_size:
        raise ValueError(f"{block_size} does not tile {total} columns")
    blocks = tuple(
        tuple(range(b * block_size, (b + 1) * block_size))
        for b in range(total // block_size)
    )
    return LiftedCode(
        base=lifted.base,
        generator=lifted.generator,
        block_size=block_size,
        blocks=blocks,
    )


def select_blocks(lifted: LiftedCode, block_indices: Sequence[int]) -> MatrixGF:
    """Submatrix of the lifted generator made of whole blocks, in order.

    Raises:
        ValueError: on an out-of-range or repeated block index.
    """
    idx = [int(b) for b in block_indices]
    if any(not 0 <= b < lifted.n_blocks for b in idx):
        raise ValueError("block index out of range")
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate block index")
    cols = [c for b in idx for c in lifted.blocks[b]]
    return lifted.generator.select_columns(cols)
