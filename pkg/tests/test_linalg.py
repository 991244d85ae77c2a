"""Matrix, rank, and solver tests.

The bit-packed GF(2) elimination, the generic table-driven elimination,
the incremental tracker, and the compiled trial kernel are four routes to
the same answers; the tests here drive them against each other and
against closed-form rank statistics.
"""

import numpy as np
import pytest

from fountainmix import (
    InconsistentSystemError,
    MatrixGF,
    NotDecodableError,
    RankTracker,
    field,
    matmul,
    rank,
    solve,
)
from fountainmix._gf2kernel import pack_columns, run_selection_trials
from fountainmix.linalg import _pack_rows, _rank_f2_ints, _rref_generic


def reference_rank_f2(a: np.ndarray) -> int:
    """Textbook row elimination over GF(2), no packing."""
    a = a.astype(np.uint8).copy()
    r = 0
    for c in range(a.shape[1]):
        pr = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if pr is None:
            continue
        a[[r, pr]] = a[[pr, r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


# --- MatrixGF basics ---

def test_matrix_validation(f256):
    with pytest.raises(ValueError):
        MatrixGF(f256, np.zeros(4))  # not 2-d
    with pytest.raises(ValueError):
        MatrixGF(f256, [[0, 256]])
    with pytest.raises(ValueError):
        MatrixGF(f256, [[-1, 0]])


def test_matrix_is_immutable(f256):
    m = MatrixGF(f256, [[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        m.values[0, 0] = 9


def test_matrix_accessors(f256):
    m = MatrixGF(f256, [[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3) and m.rows == 2 and m.cols == 3
    assert int(m[1, 2]) == 6
    assert m.row(0).tolist() == [1, 2, 3]
    assert m.column(1).tolist() == [2, 5]
    assert m.transpose().shape == (3, 2)
    assert m.select_columns([2, 0]).values.tolist() == [[3, 1], [6, 4]]
    assert m.hstack(m).shape == (2, 6)
    assert m == MatrixGF(f256, m.values)
    assert m != m.transpose()
    with pytest.raises(ValueError):
        m.select_columns([3])


def test_identity_and_zeros(f8):
    assert rank(MatrixGF.identity(f8, 5)) == 5
    assert rank(MatrixGF.zeros(f8, 3, 4)) == 0


def test_left_mul_matches_scalar_expansion(f256):
    rng = np.random.default_rng(3)
    m = MatrixGF(f256, rng.integers(0, 256, size=(4, 6)))
    u = rng.integers(0, 256, size=4)
    want = np.zeros(6, dtype=int)
    for j in range(6):
        acc = 0
        for i in range(4):
            acc ^= f256.mul(int(u[i]), int(m.values[i, j]))
        want[j] = acc
    assert np.array_equal(m.left_mul(u), want)


# --- matmul ---

def test_matmul_binary_path_matches_integer_product(f2):
    rng = np.random.default_rng(4)
    a = MatrixGF(f2, rng.integers(0, 2, size=(17, 33)))
    b = MatrixGF(f2, rng.integers(0, 2, size=(33, 9)))
    want = (a.values.astype(np.int64) @ b.values.astype(np.int64)) % 2
    assert np.array_equal(matmul(a, b).values, want)


def test_matmul_generic_path(f8):
    rng = np.random.default_rng(5)
    a = MatrixGF(f8, rng.integers(0, 8, size=(3, 5)))
    b = MatrixGF(f8, rng.integers(0, 8, size=(5, 4)))
    c = matmul(a, b)
    for i in range(3):
        for j in range(4):
            acc = 0
            for t in range(5):
                acc ^= f8.mul(int(a.values[i, t]), int(b.values[t, j]))
            assert int(c.values[i, j]) == acc


def test_matmul_shape_and_field_checks(f8, f256):
    a = MatrixGF(f8, np.zeros((2, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        matmul(a, MatrixGF(f8, np.zeros((2, 3), dtype=np.uint8)))
    with pytest.raises(ValueError):
        matmul(a, MatrixGF(f256, np.zeros((3, 2), dtype=np.uint8)))


# --- rank: packed vs generic vs reference ---

def test_rank_binary_matches_reference():
    rng = np.random.default_rng(6)
    f2 = field(1)
    for _ in range(50):
        r, c = rng.integers(1, 20, size=2)
        a = rng.integers(0, 2, size=(r, c)).astype(np.uint8)
        assert rank(MatrixGF(f2, a)) == reference_rank_f2(a)


def test_rank_binary_packed_equals_generic_elimination():
    rng = np.random.default_rng(7)
    f2 = field(1)
    for _ in range(30):
        a = rng.integers(0, 2, size=(12, 18)).astype(np.uint8)
        generic = len(_rref_generic(f2, a, range(18))[1])
        assert rank(MatrixGF(f2, a)) == generic


def test_rank_generic_field_invariants(f256):
    rng = np.random.default_rng(8)
    a = rng.integers(0, 256, size=(10, 14))
    m = MatrixGF(f256, a)
    r = rank(m)
    assert r == rank(m.transpose())
    perm = rng.permutation(14)
    assert r == rank(m.select_columns(perm))
    # scaling a row by a nonzero constant cannot change the rank
    b = a.copy()
    b[3] = f256.mul_array(b[3], 7)
    assert r == rank(MatrixGF(f256, b))


def test_rank_of_random_square_binary_matrix_statistics():
    """Fraction of full-rank random 16x16 GF(2) matrices.

    The exact probability is prod_{j=1..16} (1 - 2^-j) ~ 0.2888; the
    packed path is the implementation under test and must land within
    Monte Carlo range of the closed form.
    """
    exact = np.prod([1 - 2.0 ** -j for j in range(1, 17)])
    rng = np.random.default_rng(9)
    trials = 100000
    words = rng.integers(0, 1 << 16, size=(trials, 16), dtype=np.int64)
    full = sum(_rank_f2_ints(row.tolist()) == 16 for row in words)
    assert abs(full / trials - exact) < 0.005
    # the same draws through the public entry point, spot-checked
    for row in words[:200]:
        bits = (row[:, None] >> np.arange(16)) & 1
        assert rank(MatrixGF(field(1), bits)) == _rank_f2_ints(row.tolist())


# --- solve ---

def test_solve_roundtrip_binary(f2):
    # decodes exactly when the received columns have full rank
    rng = np.random.default_rng(10)
    decoded = 0
    for _ in range(20):
        g = MatrixGF(f2, rng.integers(0, 2, size=(6, 14)))
        if rank(g) < 6:
            continue
        u = rng.integers(0, 2, size=6)
        c = g.left_mul(u)
        idx = rng.permutation(14)[:10]
        sub = g.select_columns(idx)
        if rank(sub) == 6:
            assert np.array_equal(solve(sub, c[idx]), u)
            decoded += 1
        else:
            with pytest.raises(NotDecodableError):
                solve(sub, c[idx])
    assert decoded >= 10


def test_solve_roundtrip_f256(f256):
    rng = np.random.default_rng(11)
    g = MatrixGF(f256, rng.integers(0, 256, size=(5, 9)))
    assert rank(g) == 5
    u = rng.integers(0, 256, size=5)
    c = g.left_mul(u)
    assert np.array_equal(solve(g, c), u)


def test_solve_underdetermined_raises(f256, f2):
    for f in (f256, f2):
        g = MatrixGF.identity(f, 4).select_columns([0, 1, 2])
        with pytest.raises(NotDecodableError):
            solve(g, np.zeros(3, dtype=np.uint8))


def test_solve_inconsistent_raises(f256, f2):
    for f in (f256, f2):
        # columns of I_2 plus a repeat; mismatched repeated observation
        g = MatrixGF(f, [[1, 0, 1], [0, 1, 0]])
        with pytest.raises(InconsistentSystemError):
            solve(g, np.array([1, 1, 0]))


def test_solve_input_validation(f256):
    g = MatrixGF.identity(f256, 3)
    with pytest.raises(ValueError):
        solve(g, np.zeros(2, dtype=np.uint8))
    with pytest.raises(ValueError):
        solve(g, np.array([0, 0, 256]))


# --- RankTracker ---

def test_tracker_counts_novel_columns(f2):
    tr = RankTracker(f2, 3)
    assert tr.offer_column([1, 0, 0])
    assert not tr.offer_column([1, 0, 0])
    assert tr.offer_column([1, 1, 0])
    assert not tr.offer_column([0, 1, 0])
    assert not tr.offer_column([0, 0, 0])
    assert tr.current_rank == 2 and not tr.full()
    assert tr.offer_column([1, 1, 1])
    assert tr.full()


def test_tracker_matches_batch_rank_binary(f2):
    rng = np.random.default_rng(12)
    for _ in range(30):
        a = rng.integers(0, 2, size=(9, 25)).astype(np.uint8)
        tr = RankTracker(f2, 9)
        novel = sum(tr.offer_column(a[:, j]) for j in range(25))
        assert novel == tr.current_rank == rank(MatrixGF(f2, a))


def test_tracker_matches_batch_rank_f256(f256):
    rng = np.random.default_rng(13)
    for _ in range(10):
        a = rng.integers(0, 256, size=(6, 15))
        tr = RankTracker(f256, 6)
        for j in range(15):
            tr.offer_column(a[:, j])
        assert tr.current_rank == rank(MatrixGF(f256, a))


def test_tracker_rank_is_prefix_consistent(f256):
    # streaming must agree with batch rank of every prefix
    rng = np.random.default_rng(14)
    a = rng.integers(0, 256, size=(5, 12))
    tr = RankTracker(f256, 5)
    for j in range(12):
        tr.offer_column(a[:, j])
        assert tr.current_rank == rank(MatrixGF(f256, a[:, : j + 1]))


def test_tracker_validation(f256):
    with pytest.raises(ValueError):
        RankTracker(f256, 0)
    tr = RankTracker(f256, 4)
    with pytest.raises(ValueError):
        tr.offer_column([1, 2, 3])
    with pytest.raises(ValueError):
        tr.offer_column([0, 0, 0, 256])


# --- compiled kernel vs tracker ---

def test_kernel_agrees_with_tracker():
    rng = np.random.default_rng(15)
    f2 = field(1)
    kbits, ncols, trials = 24, 60, 20
    bits = rng.integers(0, 2, size=(kbits, ncols)).astype(np.uint8)
    cols = pack_columns(bits)
    sel = np.stack([rng.permutation(ncols) for _ in range(trials)]).astype(np.int64)
    ranks, full_steps = run_selection_trials(cols, sel, kbits, False)
    for t in range(trials):
        tr = RankTracker(f2, kbits)
        first_full = -1
        for i, j in enumerate(sel[t]):
            tr.offer_column(bits[:, j])
            if first_full < 0 and tr.full():
                first_full = i + 1
        assert ranks[t] == tr.current_rank
        assert full_steps[t] == first_full


def test_kernel_early_abort_keeps_success_verdict_exact():
    rng = np.random.default_rng(16)
    kbits = 32
    bits = rng.integers(0, 2, size=(kbits, 40)).astype(np.uint8)
    cols = pack_columns(bits)
    sel = np.stack([rng.permutation(40)[:34] for _ in range(50)]).astype(np.int64)
    full_a = run_selection_trials(cols, sel, kbits, False)[1]
    full_b = run_selection_trials(cols, sel, kbits, True)[1]
    assert np.array_equal(full_a, full_b)


def test_pack_columns_layout():
    bits = np.zeros((70, 3), dtype=np.uint8)
    bits[0, 0] = 1   # word 0, bit 0 of column 0
    bits[69, 1] = 1  # word 1, bit 5 of column 1
    cols = pack_columns(bits)
    assert cols.shape == (3, 2)
    assert cols[0, 0] == 1 and cols[0, 1] == 0
    assert cols[1, 1] == 1 << 5
    assert not cols[2].any()
