import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatpoints.gfp import (
    DEFAULT_PRIME,
    DenseMatrix,
    FieldContext,
    FieldTooSmallError,
    field_inv,
    is_prime,
    rank,
    rank_multi,
    row_reduce,
    rref,
    small_rank,
)
from fatpoints.rng import XorShift64Star

from oracles import ext_euclid_inverse, rank_by_minors, rank_gauss_last_pivot

P = DEFAULT_PRIME
BIG_PRIME = 2**31 - 1  # forces the int64 path (no exact float panel)
SMALL_PRIMES = (2, 3, 5, 7, 11)


def random_matrix(rng: XorShift64Star, rows: int, cols: int, p: int) -> list[list[int]]:
    return [[rng.below(p) for _ in range(cols)] for _ in range(rows)]


def low_rank_matrix(rng, rows, cols, k, p):
    """Product of rows x k and k x cols factors, then rows shuffled: rank <= k,
    with many pivot searches that have to skip rows."""
    a = np.array(random_matrix(rng, rows, k, p), dtype=object)
    b = np.array(random_matrix(rng, k, cols, p), dtype=object)
    m = [[int(x) % p for x in r] for r in (a.dot(b) if k else np.zeros((rows, cols), dtype=object))]
    rng.shuffle(m)
    return m


def mat(rows, p=P, cols=None):
    return DenseMatrix.from_rows(rows, FieldContext(p), cols=cols)


# --- field -----------------------------------------------------------------


def test_is_prime_against_sieve():
    n = 2000
    sieve = [True] * n
    sieve[0] = sieve[1] = False
    for i in range(2, n):
        if sieve[i]:
            for j in range(i * i, n, i):
                sieve[j] = False
    assert [is_prime(i) for i in range(n)] == sieve


def test_field_context_rejects_composite_and_huge():
    with pytest.raises(ValueError):
        FieldContext(32748)
    with pytest.raises(ValueError):
        FieldContext(2**31 + 11)
    assert FieldContext().p == 32749


def test_require_above():
    FieldContext(7).require_above(6)
    with pytest.raises(FieldTooSmallError):
        FieldContext(7).require_above(7)


@pytest.mark.parametrize("a,p,expected", [(1, 32749, 1), (2, 7, 4)])
def test_field_inv_examples(a, p, expected):
    assert field_inv(a, FieldContext(p)) == expected


def test_field_inv_matches_extended_euclid():
    ctx = FieldContext(P)
    v = field_inv(12345, ctx)
    assert 12345 * v % P == 1
    assert v == ext_euclid_inverse(12345, P)


def test_field_inv_zero():
    with pytest.raises(ZeroDivisionError):
        field_inv(0, FieldContext(7))


@given(st.integers(1, P - 1))
def test_field_inv_property(a):
    assert a * field_inv(a, FieldContext(P)) % P == 1


# --- matrix container --------------------------------------------------------


def test_dense_matrix_canonical_residues_and_readonly():
    m = mat([[-1, P + 3], [2 * P, 5]])
    assert m.tolist() == [[P - 1, 3], [0, 5]]
    assert m.shape == (2, 2) and m.rows * m.cols == m.data.size
    with pytest.raises(ValueError):
        m.data[0, 0] = 1


def test_dense_matrix_equality_and_hash():
    a, b = mat([[1, 2], [3, 4]]), mat([[1, 2], [3, 4 + P]])
    assert a == b and hash(a) == hash(b)
    assert a != mat([[1, 2], [3, 5]])


# --- rank examples -----------------------------------------------------------


def test_rank_identity_and_empty():
    assert rank(mat(np.eye(4, dtype=int).tolist())) == 4
    assert rank(mat([], cols=5)) == 0
    assert rank(DenseMatrix(np.zeros((3, 0), dtype=np.int64))) == 0


def test_rank_dependent_third_row():
    rng = XorShift64Star(11)
    r1, r2 = random_matrix(rng, 2, 3, P)
    m = [r1, r2, [(a + b) % P for a, b in zip(r1, r2)]]
    assert rank_by_minors(m, P) == 2
    assert rank(mat(m)) == 2


def test_row_reduce_examples():
    z, piv = row_reduce(mat([[0, 0, 0], [0, 0, 0]]))
    assert piv == [] and not z.data.any()
    e, piv = row_reduce(mat(np.eye(3, dtype=int).tolist()))
    assert piv == [0, 1, 2] and e == mat(np.eye(3, dtype=int).tolist())


# --- oracles -----------------------------------------------------------------


@pytest.mark.parametrize("p", SMALL_PRIMES + (P,))
def test_rank_matches_minor_oracle_small(p):
    rng = XorShift64Star(p)
    for _ in range(60):
        r, c = 1 + rng.below(4), 1 + rng.below(4)
        m = low_rank_matrix(rng, r, c, rng.below(min(r, c) + 1), p)
        assert rank(mat(m, p)) == rank_by_minors(m, p)


@pytest.mark.parametrize("p", (3, 101, P, BIG_PRIME))
@pytest.mark.parametrize("shape", [(71, 210), (150, 90), (130, 130), (5, 300)])
def test_rank_matches_gauss_oracle_panels(p, shape):
    """Shapes span several column panels; low rank forces row swaps inside them."""
    rng = XorShift64Star(p * 7 + shape[0])
    rows, cols = shape
    for k in (0, 1, min(rows, cols) // 3, min(rows, cols) - 1, min(rows, cols)):
        m = low_rank_matrix(rng, rows, cols, k, p)
        assert rank(mat(m, p)) == rank_gauss_last_pivot(m, p), k


def test_rank_with_zero_columns_and_staircase():
    rng = XorShift64Star(5)
    m = [[0] * 200 for _ in range(100)]
    for i in range(100):
        for j in range(2 * i, 200):
            m[i][j] = rng.below(P) if j % 3 else 0
    rng.shuffle(m)
    assert rank(mat(m)) == rank_gauss_last_pivot(m, P)


def test_small_rank_and_rank_multi():
    rng = XorShift64Star(9)
    for _ in range(50):
        m = low_rank_matrix(rng, 4, 6, rng.below(5), 7)
        assert small_rank(m, 7) == rank_by_minors(m, 7)
    # integer matrix singular mod 3 only
    m = [[1, 1], [1, 4]]
    assert rank_multi(m, (3, 5, 7)) == {3: 1, 5: 2, 7: 2}


# --- echelon forms ------------------------------------------------------------


def _is_echelon(a: np.ndarray, pivots) -> bool:
    r = len(pivots)
    if a[r:].any():
        return False
    for i, c in enumerate(pivots):
        if a[i, c] != 1 or a[i, :c].any():
            return False
    return list(pivots) == sorted(pivots)


@pytest.mark.parametrize("p", (5, P, BIG_PRIME))
def test_row_reduce_and_rref_contracts(p):
    rng = XorShift64Star(p)
    for rows, cols, k in [(20, 30, 7), (90, 80, 40), (3, 3, 3)]:
        m = mat(low_rank_matrix(rng, rows, cols, k, p), p)
        e, piv = row_reduce(m)
        assert _is_echelon(e.data, piv)
        assert len(piv) == rank(m)
        # same row space: stacking adds nothing
        assert rank(m.vstack(e)) == rank(m) == rank(e)
        red, rpiv = rref(m)
        assert rpiv == piv and red.rows == len(piv)
        for i, c in enumerate(rpiv):
            col = red.data[:, c]
            assert col[i] == 1 and np.count_nonzero(col) == 1
        assert rank(m.vstack(red)) == rank(m)


# --- properties --------------------------------------------------------------


@st.composite
def matrices(draw, p=P, max_side=12):
    r = draw(st.integers(1, max_side))
    c = draw(st.integers(1, max_side))
    k = draw(st.integers(0, min(r, c)))
    seed = draw(st.integers(0, 2**32))
    return low_rank_matrix(XorShift64Star(seed), r, c, k, p)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_transpose_invariant(m):
    a = mat(m)
    assert rank(a) == rank(a.transpose())


@settings(max_examples=150, deadline=None)
@given(matrices(), st.randoms(use_true_random=False), st.integers(1, P - 1))
def test_rank_row_permutation_and_scaling(m, rnd, scale):
    base = rank(mat(m))
    perm = list(m)
    rnd.shuffle(perm)
    assert rank(mat(perm)) == base
    i = rnd.randrange(len(m))
    scaled = [list(r) for r in m]
    scaled[i] = [x * scale % P for x in scaled[i]]
    assert rank(mat(scaled)) == base


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.integers(1, 10), st.integers(1, 10), st.integers(0, 2**32))
def test_stacked_rank_bounds(ra, rb, c, seed):
    rng = XorShift64Star(seed)
    a = mat(low_rank_matrix(rng, ra, c, rng.below(min(ra, c) + 1), P))
    b = mat(low_rank_matrix(rng, rb, c, rng.below(min(rb, c) + 1), P))
    both = rank(a.vstack(b))
    assert max(rank(a), rank(b)) <= both <= rank(a) + rank(b)


@settings(max_examples=100, deadline=None)
@given(matrices(p=7, max_side=6))
def test_rank_small_prime_matches_oracle(m):
    assert rank(mat(m, 7)) == rank_gauss_last_pivot(m, 7)


@pytest.mark.parametrize("p,k", [(101, 5), (31, 4), (P, 8)])
def test_random_square_full_rank_frequency(p, k):
    rng = XorShift64Star(1000 + p)
    trials = 1000
    full = sum(rank(mat(random_matrix(rng, k, k, p), p)) == k for _ in range(trials))
    assert full / trials >= 1 - 2 * k / p


def test_rank_deterministic():
    rng = XorShift64Star(3)
    m = mat(low_rank_matrix(rng, 120, 140, 60, P))
    assert len({rank(m) for _ in range(3)}) == 1
