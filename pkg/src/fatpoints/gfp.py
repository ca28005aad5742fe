"""Dense linear algebra over a prime field GF(p).

Elimination is plain Gauss with first-nonzero pivoting, organised in column
panels so the trailing update is a single matrix product.  Residues are
below 2**15 for the default prime, so a float64 product of a panel (width b)
against the pivot rows accumulates at most b * (p-1)**2 < 2**53 and is exact;
the panel width is chosen from p to keep that inequality true.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 32749

_FLOAT_EXACT = 2**53
_MAX_PANEL = 64


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, math.isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldContext:
    """The prime field GF(p)."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if self.p >= 2**31:
            # int64 products of two residues must not overflow
            raise ValueError(f"modulus {self.p} too large (must be < 2**31)")

    def require_above(self, d: int) -> None:
        """Refuse degrees d >= p (derivative conditions degenerate there)."""
        if self.p <= d:
            raise FieldTooSmallError(
                f"prime {self.p} must exceed the degree {d}: the Euler relation "
                "x.grad(D^a F) = (d-|a|) D^a F only propagates vanishing when "
                "d-|a| is invertible mod p"
            )


class FieldTooSmallError(ValueError):
    pass


@dataclass(frozen=True)
class DenseMatrix:
    """Row-major matrix of canonical residues, read-only."""

    data: np.ndarray = field(repr=False)
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        a = np.array(self.data, dtype=np.int64, copy=True)
        if a.ndim != 2:
            a = a.reshape(len(a), -1) if a.size else np.zeros((0, 0), dtype=np.int64)
        a %= self.p
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ctx: FieldContext | None = None, cols: int | None = None):
        p = (ctx or FieldContext()).p
        if len(rows) == 0:
            return cls(np.zeros((0, cols or 0), dtype=np.int64), p)
        return cls(np.asarray(rows, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.data.T, self.p)

    def vstack(self, other: "DenseMatrix") -> "DenseMatrix":
        return DenseMatrix(np.vstack([self.data, other.data]), self.p)

    def tolist(self) -> list[list[int]]:
        return self.data.tolist()

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))


def field_inv(a: int, ctx: FieldContext) -> int:
    a %= ctx.p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, -1, ctx.p)


def _panel_width(p: int) -> int:
    return max(1, min(_MAX_PANEL, (_FLOAT_EXACT - 1) // ((p - 1) ** 2)))


def _echelon_inplace(a: np.ndarray, p: int) -> list[int]:
    """Bring ``a`` (int64 residues) to row-echelon form with unit pivots.

    Returns the pivot columns.  Rows below the rank are left zero.
    """
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    width = _panel_width(p)
    use_float = (p - 1) ** 2 * width < _FLOAT_EXACT
    for c0 in range(0, n, width):
        if r == m:
            break
        c1 = min(n, c0 + width)
        w = a[r:, c0:c1]  # view: row swaps and panel updates land in a
        h = w.shape[0]
        mult = np.zeros((h, c1 - c0), dtype=np.int64)
        inv_diag = []
        k = 0
        for j in range(c1 - c0):
            if k == h:
                break
            nz = np.flatnonzero(w[k:, j])
            if nz.size == 0:
                continue
            i = k + int(nz[0])
            if i != k:
                a[[r + k, r + i]] = a[[r + i, r + k]]
                mult[[k, i]] = mult[[i, k]]
            inv = pow(int(w[k, j]), -1, p)
            w[k, j:] = w[k, j:] * inv % p
            col = w[k + 1:, j].copy()
            if col.any():
                rows = np.flatnonzero(col)
                w[k + 1 + rows, j:] = (w[k + 1 + rows, j:] - np.outer(col[rows], w[k, j:])) % p
            mult[k + 1:, k] = col
            inv_diag.append(inv)
            pivots.append(c0 + j)
            k += 1
        if k == 0 or c1 == n:
            r += k
            continue
        # Replay the panel's operations on the trailing columns:
        # top k rows through the k x k transform, the rest by one product.
        t = np.eye(k, dtype=np.int64)
        for q in range(k):
            t[q] = t[q] * inv_diag[q] % p
            if q + 1 < k:
                t[q + 1:] = (t[q + 1:] - np.outer(mult[q + 1:k, q], t[q])) % p
        top = a[r:r + k, c1:]
        if use_float:
            u = np.rint(t.astype(np.float64) @ top.astype(np.float64)).astype(np.int64) % p
        else:
            u = _matmul_mod(t, top, p)
        a[r:r + k, c1:] = u
        if h > k:
            low = mult[k:, :k]
            nzr = np.flatnonzero(low.any(axis=1))
            if nzr.size:
                if use_float:
                    upd = np.rint(low[nzr].astype(np.float64) @ u.astype(np.float64)).astype(np.int64)
                else:
                    upd = _matmul_mod(low[nzr], u, p)
                rows = r + k + nzr
                a[rows, c1:] = (a[rows, c1:] - upd) % p
        r += k
    return pivots


def _matmul_mod(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    for q in range(x.shape[1]):
        out = (out + np.outer(x[:, q], y[q])) % p
    return out


def row_reduce(m: DenseMatrix, ctx: FieldContext | None = None) -> tuple[DenseMatrix, list[int]]:
    """Row-echelon form (pivots scaled to 1) and the pivot columns."""
    p = ctx.p if ctx is not None else m.p
    a = np.array(m.data, dtype=np.int64) % p
    pivots = _echelon_inplace(a, p)
    return DenseMatrix(a, p), pivots


def rank(m: DenseMatrix, ctx: FieldContext | None = None) -> int:
    p = ctx.p if ctx is not None else m.p
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    a = np.array(m.data if m.rows <= m.cols else m.data.T, dtype=np.int64) % p
    return len(_echelon_inplace(a, p))


def rref(m: DenseMatrix, ctx: FieldContext | None = None) -> tuple[DenseMatrix, list[int]]:
    """Reduced row-echelon form restricted to its nonzero rows."""
    p = ctx.p if ctx is not None else m.p
    a = np.array(m.data, dtype=np.int64) % p
    pivots = _echelon_inplace(a, p)
    a = a[: len(pivots)]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        above = a[:i, c].copy()
        if above.any():
            a[:i] = (a[:i] - np.outer(above, a[i])) % p
    return DenseMatrix(a, p), pivots


def small_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a handful of short rows, in plain Python (no array overhead)."""
    work = [[x % p for x in r] for r in rows]
    r = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = pow(work[r][c], -1, p)
        top = [x * inv % p for x in work[r]]
        work[r] = top
        for i in range(r + 1, len(work)):
            f = work[i][c]
            if f:
                work[i] = [(a - f * b) % p for a, b in zip(work[i], top)]
        r += 1
        if r == len(work):
            break
    return r


def rank_multi(rows: Sequence[Sequence[int]], primes: Iterable[int]) -> dict[int, int]:
    """Rank of an integer matrix reduced modulo each prime.

    Disagreement between primes flags an unlucky reduction.
    """
    out = {}
    for q in primes:
        ctx = FieldContext(q)
        out[q] = rank(DenseMatrix.from_rows(rows, ctx), ctx)
    return out
