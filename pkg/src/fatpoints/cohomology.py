"""h^0 and h^1 of I_Z(d) by rank of the interpolation-conditions matrix.

A degree-d form F lies in I_Z(d) iff every partial derivative of order
m_i - 1 vanishes at p_i.  Only the top order is imposed: if all order-k
partials of F vanish at a point, Euler's relation
sum_j x_j d_j(D^a F) = (d - |a|) D^a F gives vanishing of the lower ones as
long as d - |a| is a unit mod p, which p > d guarantees.  When m_i - 1 > d
the order is capped at d; vanishing of every order-d partial already forces
F = 0, so no information is lost, while deg Z keeps the true value.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .combinatorics import binomial, falling_factorial, monomials
from .gfp import DenseMatrix, FieldContext, rank
from .geometry import (
    FatPointScheme,
    LinearSpan,
    PrimePoint,
    coordinates_in,
    trace,
)


class RegularityNotReached(RuntimeError):
    """h^1 did not vanish by w(Z) - 1: a kernel bug or a degenerate prime."""


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    rank: int
    h0: int
    h1: int
    hilbert: int
    degZ: int
    prime: int
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=64)
def _exponents(n: int, d: int) -> np.ndarray:
    e = np.array(monomials(n, d), dtype=np.int64).reshape(-1, n + 1)
    e.setflags(write=False)
    return e


@lru_cache(maxsize=64)
def _ff_table(d: int, p: int) -> np.ndarray:
    t = np.array(
        [[falling_factorial(e, a) % p for a in range(d + 1)] for e in range(d + 1)], dtype=np.int64
    )
    t.setflags(write=False)
    return t


def _point_rows(coords: Sequence[int], k: int, n: int, d: int, p: int) -> np.ndarray:
    """Rows D^a(x^e)(point) for |a| = k, columns e in monomial order."""
    E = _exponents(n, d)
    A = _exponents(n, k)
    ff = _ff_table(d, p)
    powers = np.ones((n + 1, d + 1), dtype=np.int64)
    for j, c in enumerate(coords):
        for t in range(1, d + 1):
            powers[j, t] = powers[j, t - 1] * c % p
    out = np.ones((A.shape[0], E.shape[0]), dtype=np.int64)
    for j in range(n + 1):
        diff = E[None, :, j] - A[:, None, j]
        ok = diff >= 0
        coef = np.where(ok, ff[E[None, :, j], np.minimum(A[:, None, j], d)], 0)
        val = powers[j, np.where(ok, diff, 0)]
        out = out * coef % p * val % p
    return out


def conditions_matrix(Z: FatPointScheme, d: int) -> DenseMatrix:
    """Rows: order-min(m_i - 1, d) partials at each p_i; columns: degree-d monomials."""
    ctx = FieldContext(Z.p)
    ctx.require_above(d)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    ncols = binomial(Z.n + d, Z.n)
    blocks = [
        _point_rows(q.coords, min(m - 1, d), Z.n, d, Z.p)
        for q, m in zip(Z.points, Z.multiplicities)
    ]
    if not blocks:
        return DenseMatrix(np.zeros((0, ncols), dtype=np.int64), Z.p)
    return DenseMatrix(np.vstack(blocks), Z.p)


def _report(Z: FatPointScheme, d: int, r: int) -> CohomologyReport:
    N = binomial(Z.n + d, Z.n)
    degZ = Z.degree
    return CohomologyReport(
        degree=d, rank=r, h0=N - r, h1=degZ - r, hilbert=r, degZ=degZ, prime=Z.p, n=Z.n
    )


def cohomology(Z: FatPointScheme, d: int) -> CohomologyReport:
    m = conditions_matrix(Z, d)
    return _report(Z, d, rank(m))


def regularity_index(Z: FatPointScheme, paranoid: bool = False) -> int:
    """Smallest d >= 1 with h^1(I_Z(d)) = 0.

    Degrees with fewer monomials than deg Z are skipped (h^1 >= deg Z - N > 0
    there).  With ``paranoid`` the vanishing is re-checked at d + 1.
    """
    if Z.s == 0:
        return 1
    m1 = max(Z.multiplicities)
    stop = max(1, Z.weight - 1)
    FieldContext(Z.p).require_above(stop + (1 if paranoid else 0))
    degZ = Z.degree
    for d in range(max(1, m1 - 1), stop + 1):
        if binomial(Z.n + d, Z.n) < degZ:
            continue
        if cohomology(Z, d).h1 == 0:
            if paranoid and cohomology(Z, d + 1).h1 != 0:
                raise RegularityNotReached(f"h^1 vanished at {d} but not at {d + 1}")
            return d
    raise RegularityNotReached(f"h^1 still nonzero at the Fulton bound w(Z) - 1 = {stop}")


def system_dimension(spec, points: Sequence[PrimePoint]) -> int:
    """Affine dimension of L_{n,d}(m_1..m_s) at the given points (= h^0)."""
    if len(points) != len(spec.multiplicities):
        raise ValueError("need one point per multiplicity")
    if not points:
        return binomial(spec.n + spec.d, spec.n)
    p = points[0].p
    Z = FatPointScheme(tuple(points), tuple(spec.multiplicities), spec.n, p)
    return cohomology(Z, spec.d).h0


def trace_scheme(Z: FatPointScheme, L: LinearSpan,
                 basis: Sequence[Sequence[int]] | None = None) -> FatPointScheme:
    """Z restricted to L, written in coordinates of P^r = L.

    ``basis`` may be any r+1 independent rows spanning L; default is the
    canonical basis of L.
    """
    rows = L.basis if basis is None else basis
    if len(rows) != L.dim + 1:
        raise ValueError("basis must have dim(L) + 1 rows")
    pts, mults = [], []
    for q, m in trace(Z, L):
        pts.append(PrimePoint(coordinates_in(q, rows, Z.p), Z.p))
        mults.append(m)
    return FatPointScheme(tuple(pts), tuple(mults), L.dim, Z.p)


def restricted_cohomology(Z: FatPointScheme, L: LinearSpan, d: int,
                          basis: Sequence[Sequence[int]] | None = None) -> CohomologyReport:
    """h^0, h^1 of I_{Z cap L}(d) on L."""
    if L.dim < 1:
        raise ValueError("need a subspace of dimension >= 1")
    return cohomology(trace_scheme(Z, L, basis), d)
