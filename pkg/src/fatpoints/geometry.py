"""Point configurations in P^n over GF(p).

Points are stored normalized (first nonzero coordinate 1), linear spans in
reduced row-echelon form, so equality of points and of spans is equality of
their stored representations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import binomial
from .gfp import DEFAULT_PRIME, DenseMatrix, FieldContext, rref, small_rank
from .rng import XorShift64Star

LINEAR_GENERAL_GUARD = 16
UNIFORM_POSITION_GUARD = 12
MAX_RETRIES = 1000


class GuardExceeded(ValueError):
    """Enumeration would be too large; refused rather than truncated."""


class Unsupported(ValueError):
    """The predicate has no criterion for this input."""


class GenerationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimePoint:
    coords: tuple[int, ...]
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        c = [int(x) % self.p for x in self.coords]
        lead = next((x for x in c if x), 0)
        if lead == 0:
            raise ValueError("all coordinates are zero")
        inv = pow(lead, -1, self.p)
        object.__setattr__(self, "coords", tuple(x * inv % self.p for x in c))

    @property
    def n(self) -> int:
        return len(self.coords) - 1


@dataclass(frozen=True)
class FatPointScheme:
    """Z = sum m_i p_i.  May be empty (the residual of a scheme can be)."""

    points: tuple[PrimePoint, ...]
    multiplicities: tuple[int, ...]
    n: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        pts = tuple(self.points)
        ms = tuple(int(m) for m in self.multiplicities)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", ms)
        if len(pts) != len(ms):
            raise ValueError("points and multiplicities differ in length")
        if any(m < 1 for m in ms):
            raise ValueError("multiplicities must be positive")
        if any(q.n != self.n or q.p != self.p for q in pts):
            raise ValueError("point dimension or prime does not match the scheme")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be pairwise distinct")

    @classmethod
    def build(cls, coords: Sequence[Sequence[int]], mults: Sequence[int], p: int = DEFAULT_PRIME):
        pts = tuple(PrimePoint(tuple(c), p) for c in coords)
        if not pts:
            raise ValueError("use FatPointScheme((), (), n, p) for an empty scheme")
        return cls(pts, tuple(mults), pts[0].n, p)

    @property
    def s(self) -> int:
        return len(self.points)

    @property
    def weight(self) -> int:
        return sum(self.multiplicities)

    @property
    def degree(self) -> int:
        return sum(binomial(self.n + m - 1, self.n) for m in self.multiplicities)

    def sorted(self) -> "FatPointScheme":
        """Same scheme with multiplicities non-increasing (stable)."""
        order = sorted(range(self.s), key=lambda i: -self.multiplicities[i])
        return FatPointScheme(
            tuple(self.points[i] for i in order),
            tuple(self.multiplicities[i] for i in order),
            self.n,
            self.p,
        )

    def with_multiplicities(self, mults: Sequence[int]) -> "FatPointScheme":
        """Drop points whose new multiplicity is 0."""
        keep = [i for i, m in enumerate(mults) if m > 0]
        return FatPointScheme(
            tuple(self.points[i] for i in keep), tuple(mults[i] for i in keep), self.n, self.p
        )


@dataclass(frozen=True)
class LinearSpan:
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]
    n: int
    p: int = DEFAULT_PRIME

    @property
    def dim(self) -> int:
        return len(self.basis) - 1


def _rref_rows(rows: Sequence[Sequence[int]], p: int):
    m, piv = rref(DenseMatrix(np.asarray(rows, dtype=np.int64), p))
    return tuple(tuple(r) for r in m.tolist()), tuple(piv)


def span_of(points: Iterable[PrimePoint]) -> LinearSpan:
    pts = list(points)
    if not pts:
        raise ValueError("span of the empty set is not a projective subspace")
    basis, piv = _rref_rows([q.coords for q in pts], pts[0].p)
    return LinearSpan(basis, piv, pts[0].n, pts[0].p)


def span_of_rows(rows: Sequence[Sequence[int]], n: int, p: int = DEFAULT_PRIME) -> LinearSpan:
    basis, piv = _rref_rows(rows, p)
    if not basis:
        raise ValueError("rows span the zero space")
    return LinearSpan(basis, piv, n, p)


def whole_space(n: int, p: int = DEFAULT_PRIME) -> LinearSpan:
    return span_of_rows(np.eye(n + 1, dtype=np.int64), n, p)


def coordinate_hyperplane(n: int, i: int, p: int = DEFAULT_PRIME) -> LinearSpan:
    """The hyperplane x_i = 0."""
    rows = [[1 if c == j else 0 for c in range(n + 1)] for j in range(n + 1) if j != i]
    return span_of_rows(rows, n, p)


def contains(L: LinearSpan, q: PrimePoint) -> bool:
    p = L.p
    v = list(q.coords)
    for row, c in zip(L.basis, L.pivots):
        f = v[c]
        if f:
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return not any(v)


def coordinates_in(q: PrimePoint, basis: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    """Coefficients lam with q = sum lam_i basis_i (basis rows independent)."""
    k = len(basis)
    aug = np.zeros((len(q.coords), k + 1), dtype=np.int64)
    aug[:, :k] = np.asarray(basis, dtype=np.int64).T
    aug[:, k] = q.coords
    red, piv = rref(DenseMatrix(aug, p))
    if k in piv or len(piv) != k:
        raise ValueError("point not in the span of the basis")
    return tuple(int(x) for x in red.data[:k, k])


def weight_on(Z: FatPointScheme, L: LinearSpan) -> int:
    return sum(m for q, m in zip(Z.points, Z.multiplicities) if contains(L, q))


def trace(Z: FatPointScheme, L: LinearSpan) -> list[tuple[PrimePoint, int]]:
    return [(q, m) for q, m in zip(Z.points, Z.multiplicities) if contains(L, q)]


def _full_rank(rows: Sequence[Sequence[int]], p: int) -> bool:
    return small_rank(rows, p) == len(rows)


def is_linearly_general(points: Sequence[PrimePoint]) -> bool:
    """Every k <= n+1 of the points span a (k-1)-plane.

    Enough to test the (n+1)-subsets, or the whole set when s <= n+1.
    Refuses s > 16.
    """
    pts = list(points)
    if not pts:
        raise ValueError("need at least one point")
    s, n, p = len(pts), pts[0].n, pts[0].p
    if s > LINEAR_GENERAL_GUARD:
        raise GuardExceeded(f"linear generality check refused for s={s} > {LINEAR_GENERAL_GUARD}")
    if s <= n + 1:
        return _full_rank([q.coords for q in pts], p)
    return all(_full_rank([q.coords for q in sub], p) for sub in combinations(pts, n + 1))


def residual(Z: FatPointScheme, H: LinearSpan) -> FatPointScheme:
    """Res_H(Z): multiplicity drops by one at the points on the hyperplane H."""
    if H.dim != Z.n - 1:
        raise ValueError("residual needs a hyperplane")
    mults = [m - 1 if contains(H, q) else m for q, m in zip(Z.points, Z.multiplicities)]
    return Z.with_multiplicities(mults)


def on_standard_rnc(q: PrimePoint) -> bool:
    """Membership on the curve t -> (1 : t : ... : t^n), closure included."""
    c = q.coords
    if c[0] == 0:
        return all(x == 0 for x in c[1:-1]) and c[-1] == 1
    t = c[1]
    return all(c[i] == pow(t, i, q.p) for i in range(len(c)))


def is_on_rational_normal_curve(points: Sequence[PrimePoint]) -> bool:
    """Containment in some degree-n rational normal curve.

    For s >= 2n+3 points in linearly general position this holds iff the
    quadrics through them form a space of dimension C(n+2,2) - (2n+1).
    Anything else raises Unsupported.
    """
    from .cohomology import cohomology

    pts = list(points)
    n = pts[0].n
    if len(pts) < 2 * n + 3:
        raise Unsupported(f"quadric criterion needs s >= 2n+3 = {2 * n + 3}, got {len(pts)}")
    if not is_linearly_general(pts):
        raise Unsupported("points are not in linearly general position")
    Z = FatPointScheme(tuple(pts), (1,) * len(pts), n, pts[0].p)
    return cohomology(Z, 2).h0 == binomial(n + 2, 2) - (2 * n + 1)


def is_uniform_position_deg(points: Sequence[PrimePoint], x: int) -> bool:
    """Equal-size subsets share Hilbert function values at 1..x."""
    from .cohomology import cohomology

    pts = list(points)
    if x < 1:
        raise ValueError("x must be >= 1")
    if len(pts) > UNIFORM_POSITION_GUARD:
        raise GuardExceeded(f"uniform position check refused for s={len(pts)} > {UNIFORM_POSITION_GUARD}")
    n, p = pts[0].n, pts[0].p
    for k in range(1, len(pts) + 1):
        seen = None
        for sub in combinations(pts, k):
            Z = FatPointScheme(sub, (1,) * k, n, p)
            hf = tuple(cohomology(Z, t).hilbert for t in range(1, x + 1))
            if seen is None:
                seen = hf
            elif hf != seen:
                return False
    return True


# --- generators -------------------------------------------------------------


def _random_coords(rng: XorShift64Star, n: int, p: int) -> tuple[int, ...]:
    while True:
        c = tuple(rng.below(p) for _ in range(n + 1))
        if any(c):
            return c


def _extends_general(chosen: list[PrimePoint], q: PrimePoint) -> bool:
    """Does adding q keep the set linearly general (given chosen already is)?"""
    n, p = q.n, q.p
    if q in chosen:
        return False
    if len(chosen) < n + 1:
        return _full_rank([c.coords for c in chosen] + [q.coords], p)
    return all(_full_rank([c.coords for c in sub] + [q.coords], p) for sub in combinations(chosen, n))


def gen_general(n: int, s: int, seed: int, p: int = DEFAULT_PRIME,
                start: Sequence[PrimePoint] = (), avoid=None) -> list[PrimePoint]:
    """s seeded random points, pairwise distinct and linearly general.

    With ``start`` (already linearly general) the s new points are chosen so
    that start + new stays linearly general; only the new points are
    returned.  ``avoid`` is an optional predicate rejecting candidates.
    """
    if s < 1:
        raise ValueError("s must be positive")
    rng = XorShift64Star(seed)
    chosen = list(start)
    while len(chosen) < len(start) + s:
        for _ in range(MAX_RETRIES):
            q = PrimePoint(_random_coords(rng, n, p), p)
            if avoid is not None and avoid(q):
                continue
            if _extends_general(chosen, q):
                chosen.append(q)
                break
        else:
            raise GenerationFailed(f"no general point after {MAX_RETRIES} tries (p={p} too small?)")
    return chosen[len(start):]


def _distinct_params(rng: XorShift64Star, s: int, p: int, exclude=()) -> list[int]:
    if s + len(exclude) > p:
        raise ValueError(f"cannot pick {s} distinct parameters in GF({p})")
    seen = set(exclude)
    out = []
    while len(out) < s:
        t = rng.below(p)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def rnc_point(t: int, n: int, p: int = DEFAULT_PRIME) -> PrimePoint:
    return PrimePoint(tuple(pow(t, i, p) for i in range(n + 1)), p)


def gen_rnc(n: int, s: int, seed: int, p: int = DEFAULT_PRIME) -> list[PrimePoint]:
    """s points (1 : t : ... : t^n) at distinct seeded parameters t."""
    if s > p:
        raise ValueError(f"only {p} affine points on the curve over GF({p})")
    rng = XorShift64Star(seed)
    return [rnc_point(t, n, p) for t in _distinct_params(rng, s, p)]


def gen_hyperplane_split(n: int, on_h: int, off_h: int, seed: int, p: int = DEFAULT_PRIME) -> list[PrimePoint]:
    """on_h points linearly general inside {x_n = 0}, then off_h points off it.

    The off-hyperplane points are chosen so the whole set is linearly general
    apart from the forced dependencies inside the hyperplane.
    """
    rng = XorShift64Star(seed)
    inner = gen_general(n - 1, on_h, rng.next_u64(), p)
    on = [PrimePoint(q.coords + (0,), p) for q in inner]
    off: list[PrimePoint] = []
    for _ in range(off_h):
        for _ in range(MAX_RETRIES):
            c = _random_coords(rng, n, p)
            if c[-1] == 0:
                continue
            q = PrimePoint(c, p)
            # no new dependency among any n points including q (other than those forced)
            if q in off or not all(
                _full_rank([a.coords for a in sub] + [q.coords], p)
                for k in range(1, n + 1)
                for sub in combinations(on + off, k)
                if _full_rank([a.coords for a in sub], p)
            ):
                continue
            off.append(q)
            break
        else:
            raise GenerationFailed("could not place a point off the hyperplane")
    return on + off


def gen_cone_example(n: int, d: int, seed: int, p: int = DEFAULT_PRIME) -> FatPointScheme:
    """Vertex e_0 with multiplicity d plus (n-1)d+2 simple points on the cone
    over the rational normal curve (0 : 1 : t : ... : t^(n-1)) of {x_0 = 0}."""
    if n < 3 or d < 2:
        raise ValueError("need n >= 3 and d >= 2")
    s = (n - 1) * d + 3
    rng = XorShift64Star(seed)
    ts = _distinct_params(rng, s - 1, p)
    pts = [PrimePoint((1,) + (0,) * n, p)]
    for t in ts:
        lam = 1 + rng.below(p - 1)
        pts.append(PrimePoint((1,) + tuple(lam * pow(t, i, p) % p for i in range(n)), p))
    return FatPointScheme(tuple(pts), (d,) + (1,) * (s - 1), n, p)


def project_from_vertex(q: PrimePoint) -> PrimePoint:
    """Projection from e_0 onto {x_0 = 0}, in that hyperplane's coordinates."""
    return PrimePoint(q.coords[1:], q.p)


APPENDIX_POINTS = {
    1: [
        (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0),
        (1, 1, 1, 1, 0), (0, 0, 0, 0, 1), (1, 1, -1, 0, 1),
    ],
    2: [
        (1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1), (1, 1, 1, 1, 0, 0), (1, 1, 0, 0, 1, 1),
    ],
}
APPENDIX_MULT = {1: 3, 2: 2}


def gen_appendix(which: int, p: int = DEFAULT_PRIME, multiplicity: int | None = None) -> FatPointScheme:
    """The two explicit configurations of the Macaulay2 checks.

    1: seven points of P^4 (triple points); 2: eight points of P^5 (double).
    """
    coords = APPENDIX_POINTS[which]
    m = APPENDIX_MULT[which] if multiplicity is None else multiplicity
    return FatPointScheme.build(coords, [m] * len(coords), p)


def gen_rnc_plus_general(n: int, b: int, s: int, mults: Sequence[int], seed: int,
                         p: int = DEFAULT_PRIME) -> FatPointScheme:
    """First b points on the standard rational normal curve, the rest general
    points off it, the whole set linearly general.

    Requires w = sum(mults) = n*d + alpha with 1 <= alpha <= n-1, d >= 4, and
    the points after b carrying total weight <= alpha.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got n={n}")
    if not 1 <= b < s:
        raise ValueError(f"need 1 <= b < s, got b={b}, s={s}")
    if len(mults) != s:
        raise ValueError("need one multiplicity per point")
    w = sum(mults)
    d, alpha = divmod(w, n)
    if not 1 <= alpha <= n - 1:
        raise ValueError(f"w = {w} = {n}*{d} + {alpha}: need 1 <= alpha <= n-1")
    if d < 4:
        raise ValueError(f"w = {n}*{d} + {alpha}: need d >= 4")
    tail = sum(mults[b:])
    if tail > alpha:
        raise ValueError(f"sum of m_i for i > b is {tail} > alpha = {alpha}")
    rng = XorShift64Star(seed)
    on = gen_rnc(n, b, rng.next_u64(), p)
    off = gen_general(n, s - b, rng.next_u64(), p, start=on, avoid=on_standard_rnc)
    return FatPointScheme(tuple(on + off), tuple(mults), n, p)


# --- scheme files -----------------------------------------------------------


def scheme_to_dict(Z: FatPointScheme) -> dict:
    return {
        "prime": Z.p,
        "n": Z.n,
        "points": [list(q.coords) for q in Z.points],
        "multiplicities": list(Z.multiplicities),
    }


def scheme_from_dict(obj: dict, prime: int | None = None) -> FatPointScheme:
    """Coordinates are integers reduced modulo ``prime`` (default: the file's)."""
    p = int(prime if prime is not None else obj.get("prime", DEFAULT_PRIME))
    FieldContext(p)
    n = int(obj["n"])
    pts = tuple(PrimePoint(tuple(int(x) for x in c), p) for c in obj["points"])
    if any(len(q.coords) != n + 1 for q in pts):
        raise ValueError(f"every point needs n+1 = {n + 1} coordinates")
    return FatPointScheme(pts, tuple(int(m) for m in obj["multiplicities"]), n, p)


def load_scheme(path: str | Path, prime: int | None = None) -> FatPointScheme:
    with open(path, encoding="utf-8") as fh:
        return scheme_from_dict(json.load(fh), prime)


def save_scheme(Z: FatPointScheme, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scheme_to_dict(Z), fh)
        fh.write("\n")
