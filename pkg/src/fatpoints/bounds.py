"""Closed-form regularity bounds and dimension counts for linear systems.

Generalized Segre bound: for any subspace L, w_L(Z) = w_{L'}(Z) with
L' = span(S cap L), and dim L' <= dim L, so T(Z, L') >= T(Z, L).  The max
over all L is therefore attained on the ambient space or on a span of at
most n+1 support points, which is what gets enumerated.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import NamedTuple, Sequence

from .combinatorics import binomial
from .geometry import (
    FatPointScheme,
    GuardExceeded,
    LinearSpan,
    span_of,
    weight_on,
    whole_space,
)

SPAN_GUARD = 16
LVDIM_GUARD = 20


@dataclass(frozen=True)
class LinearSystemSpec:
    """L_{n,d}(m_1, ..., m_s); multiplicities kept non-increasing."""

    n: int
    d: int
    multiplicities: tuple[int, ...] = ()

    def __post_init__(self):
        ms = tuple(sorted((int(m) for m in self.multiplicities), reverse=True))
        if any(m < 1 for m in ms):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "multiplicities", ms)

    @property
    def s(self) -> int:
        return len(self.multiplicities)

    @property
    def weight(self) -> int:
        return sum(self.multiplicities)


def _top_two(mults: Sequence[int]) -> tuple[int, int]:
    ms = sorted(mults, reverse=True)
    return ms[0], (ms[1] if len(ms) > 1 else 0)


def segre_bound_p2(mults: Sequence[int]) -> int:
    m1, m2 = _top_two(mults)
    return max(m1 + m2 - 1, sum(mults) // 2)


def fulton_bound(mults: Sequence[int]) -> int:
    return sum(mults) - 1


def segre_bound_pn(n: int, mults: Sequence[int]) -> int:
    m1, m2 = _top_two(mults)
    return max(m1 + m2 - 1, (sum(mults) + n - 2) // n)


def T_value(w_L: int, r: int) -> int:
    if r < 1:
        raise ValueError("T is defined for subspaces of dimension >= 1")
    return (w_L + r - 2) // r


def T_of(Z: FatPointScheme, L: LinearSpan) -> int:
    return T_value(weight_on(Z, L), L.dim)


def support_spans(Z: FatPointScheme, min_dim: int = 1) -> list[LinearSpan]:
    """Distinct spans of 2..n+1 support points, of dimension >= min_dim."""
    if Z.s > SPAN_GUARD:
        raise GuardExceeded(f"span enumeration refused for s={Z.s} > {SPAN_GUARD}")
    seen: dict[LinearSpan, None] = {}
    for k in range(2, min(Z.s, Z.n + 1) + 1):
        for sub in combinations(Z.points, k):
            L = span_of(sub)
            if L.dim >= min_dim:
                seen.setdefault(L)
    return list(seen)


def generalized_segre_witness(Z: FatPointScheme) -> tuple[int, LinearSpan]:
    """The bound and a subspace attaining it (ties: ambient space first)."""
    best_L = whole_space(Z.n, Z.p)
    best = T_value(Z.weight, Z.n)
    for L in support_spans(Z):
        t = T_of(Z, L)
        if t > best:
            best, best_L = t, L
    return best, best_L


def generalized_segre_bound(Z: FatPointScheme) -> int:
    return generalized_segre_witness(Z)[0]


def vdim(spec: LinearSystemSpec) -> int:
    n = spec.n
    return binomial(n + spec.d, n) - sum(binomial(n + m - 1, n) for m in spec.multiplicities)


def edim(spec: LinearSystemSpec) -> int:
    return max(vdim(spec), 0)


def k_of(spec: LinearSystemSpec, I: Sequence[int]) -> int:
    """k_{I(r)} with r = |I| - 1; I holds 0-based positions into the multiplicities."""
    r = len(I) - 1
    return max(sum(spec.multiplicities[i] for i in I) - r * spec.d, 0)


def lvdim(spec: LinearSystemSpec) -> int:
    """Linear virtual dimension: alternating sum over all index subsets I(r).

    Subsets whose binomial vanishes (k_I <= r for r >= 1) are skipped once
    no subset of that size can reach k_I > r; the value is exact.
    """
    n, d, ms, s = spec.n, spec.d, spec.multiplicities, spec.s
    if s > LVDIM_GUARD:
        raise GuardExceeded(f"linear virtual dimension refused for s={s} > {LVDIM_GUARD}")
    total = binomial(n + d, n)  # I(-1) = empty set, k = d
    total -= sum(binomial(n + m - 1, n) for m in ms)
    prunable = not ms or ms[0] <= d + 1
    for r in range(1, s):
        if prunable and sum(ms[: r + 1]) - r * d <= r:
            break
        sign = 1 if (r + 1) % 2 == 0 else -1
        for I in combinations(range(s), r + 1):
            k = k_of(spec, I)
            total += sign * binomial(n + k - r - 1, n)
    return total


class Ldim(NamedTuple):
    value: int
    containment_clause_unchecked: bool = True


def ldim(spec: LinearSystemSpec) -> Ldim:
    """max(lvdim, 0).  Whether the system sits inside some other system of
    non-positive linear virtual dimension is not searched; the flag says so."""
    return Ldim(max(lvdim(spec), 0), True)


def s_of_d(spec: LinearSystemSpec) -> int:
    return sum(1 for m in spec.multiplicities if m == spec.d)


def b_of(spec: LinearSystemSpec) -> int:
    return min(spec.n - s_of_d(spec), spec.s - spec.n - 2)


def c_value(n: int, s: int) -> int:
    if s < n + 3:
        raise ValueError(f"c = min(n, s-n-2) needs s >= n+3 (n={n}, s={s})")
    return min(n, s - n - 2)


def c_of(spec: LinearSystemSpec) -> int:
    return c_value(spec.n, spec.s)


def bdp_applicable(spec: LinearSystemSpec) -> tuple[bool, str]:
    """Hypotheses under which the system is only linearly obstructed."""
    n, d, ms = spec.n, spec.d, spec.multiplicities
    if spec.s < n + 3:
        return False, "s >= n+3"
    if n < 1:
        return False, "n >= 1"
    if d < 2:
        return False, "d >= 2"
    if ms[0] > d:
        return False, "d >= m_1"
    if spec.weight > n * d + b_of(spec):
        return False, "sum m_i <= n*d + b"
    return True, ""


def bdp_bound(n: int, mults: Sequence[int]) -> int:
    s = len(mults)
    c = c_value(n, s)
    m1, m2 = _top_two(mults)
    w = sum(mults)
    return max(m1 + m2 - 1, -((c - w) // n))


@dataclass(frozen=True)
class TableRow:
    table: int
    column: str
    segre_offset: int
    bdp_offset: int


def compare_bounds(n: int, s: int, w: int) -> TableRow:
    """Second terms of the Segre and BDP bounds as offsets from mu, w = mu*n + lam."""
    if s < n + 4:
        raise ValueError("comparison tables cover s >= n+4")
    lam = w % n
    if s >= 2 * n + 3:
        if lam == 0:
            return TableRow(2, "lambda=0", 0, -1)
        if lam == 1:
            return TableRow(2, "lambda=1", 0, 0)
        return TableRow(2, "2<=lambda<=n-1", 1, 0)
    if lam == 0:
        if s == 2 * n + 2:
            return TableRow(1, "lambda=0, s=2n+2", 0, -1)
        return TableRow(1, "lambda=0, s<=2n+1", 0, 0)
    if lam == 1:
        return TableRow(1, "lambda=1", 0, 0)
    if lam <= s - n - 2:
        return TableRow(1, "2<=lambda<=s-n-2", 1, 0)
    return TableRow(1, "s-n-2<lambda<=n-1", 1, 1)


def direct_offsets(n: int, s: int, w: int) -> tuple[int, int]:
    """The same offsets straight from the formulas."""
    mu = w // n
    segre = (w + n - 2) // n
    bdp = -((c_value(n, s) - w) // n)
    return segre - mu, bdp - mu


def chain_inequality_rhs_twice(t: int, eta: int) -> int:
    """Twice the right-hand side: (t+1)eta - 2t (even eta) or (t+1)eta - (t-1) (odd)."""
    return (t + 1) * eta - (2 * t if eta % 2 == 0 else t - 1)


def chain_inequality_holds(z: int, zs: Sequence[int]) -> bool:
    eta = z + zs[0] + 1
    return 2 * (z + sum(zs)) <= chain_inequality_rhs_twice(len(zs), eta)


@dataclass
class BoundReport:
    n: int
    multiplicities: tuple[int, ...]
    measured_reg: int
    fulton: int
    segre_pn: int
    generalized_segre: int | None = None
    segre_p2: int | None = None
    bdp: int | None = None
    holds: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["multiplicities"] = list(self.multiplicities)
        return out


def bound_report(Z: FatPointScheme, measured_reg: int) -> BoundReport:
    """Every applicable bound for Z next to its measured regularity index.

    Bounds are clamped to >= 1: the regularity index is a positive integer.
    """
    ms = tuple(sorted(Z.multiplicities, reverse=True))
    n = Z.n
    rep = BoundReport(
        n=n,
        multiplicities=ms,
        measured_reg=measured_reg,
        fulton=max(1, fulton_bound(ms)),
        segre_pn=max(1, segre_bound_pn(n, ms)),
    )
    if Z.s <= SPAN_GUARD:
        rep.generalized_segre = max(1, generalized_segre_bound(Z))
    if n == 2:
        rep.segre_p2 = max(1, segre_bound_p2(ms))
    if Z.s >= n + 3:
        rep.bdp = max(1, bdp_bound(n, ms))
    for name in ("segre_p2", "fulton", "segre_pn", "generalized_segre", "bdp"):
        v = getattr(rep, name)
        if v is not None:
            rep.holds[name] = measured_reg <= v
    return rep
