"""Instance checkers for the regularity statements, and the sweep harness.

Every checker measures h^1 or the regularity index by rank computation
before it reports ``holds``; a conditional statement whose hypotheses fail
yields ``inapplicable`` with the failed hypothesis named.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Callable, Sequence

from . import bounds
from .cohomology import CohomologyReport, cohomology, regularity_index, restricted_cohomology
from .geometry import (
    FatPointScheme,
    PrimePoint,
    gen_appendix,
    gen_cone_example,
    gen_general,
    gen_hyperplane_split,
    gen_rnc,
    is_linearly_general,
    is_on_rational_normal_curve,
    scheme_from_dict,
    scheme_to_dict,
    span_of,
    weight_on,
)
from .gfp import DEFAULT_PRIME
from .rng import XorShift64Star, derive_seed

log = logging.getLogger(__name__)

HOLDS, VIOLATED, INAPPLICABLE = "holds", "violated", "inapplicable"


class InternalInconsistency(RuntimeError):
    pass


@dataclass
class VerificationRecord:
    claim: str
    verdict: str
    predicted: object
    measured: object
    scheme: dict | None
    params: dict = field(default_factory=dict)
    reason: str = ""
    prime: int = DEFAULT_PRIME
    record_id: int = 0
    timestamp: str = ""

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "VerificationRecord":
        return cls(**obj)


def audit(Z: FatPointScheme, rep: CohomologyReport) -> CohomologyReport:
    """Euler identity h0 - h1 = vdim and nonnegativity, against the formula side."""
    spec = bounds.LinearSystemSpec(Z.n, rep.degree, Z.multiplicities)
    if rep.h0 - rep.h1 != bounds.vdim(spec) or rep.h0 < 0 or rep.h1 < 0:
        raise InternalInconsistency(f"bad report {rep} for multiplicities {Z.multiplicities}")
    return rep


def h1(Z: FatPointScheme, d: int) -> int:
    return audit(Z, cohomology(Z, d)).h1


def _record(claim, verdict, predicted, measured, Z, reason="", **params) -> VerificationRecord:
    return VerificationRecord(
        claim=claim,
        verdict=verdict,
        predicted=predicted,
        measured=measured,
        scheme=scheme_to_dict(Z) if Z is not None else None,
        params=params,
        reason=reason,
        prime=Z.p if Z is not None else DEFAULT_PRIME,
    )


# --- claim checkers ---------------------------------------------------------


def check_generalized_segre(Z: FatPointScheme, offset: int = 0) -> VerificationRecord:
    """reg(Z) <= max_L T(Z, L).  ``offset`` shifts the bound (harness self-test)."""
    bound = bounds.generalized_segre_bound(Z) + offset
    reg = regularity_index(Z)
    audit(Z, cohomology(Z, reg))
    verdict = HOLDS if reg <= bound else VIOLATED
    return _record("gen-segre", verdict, bound, reg, Z, offset=offset)


def seg_conditions(Z: FatPointScheme, d: int) -> tuple[str, int]:
    """First failed hypothesis of the modified Segre conjecture ('' if none),
    and how many r-planes met w_L = rd+2 and passed the restricted check.

    Lines through one support point have weight m_i; subspaces not spanned
    by support points inherit a smaller bound from the span of their points,
    so only spans need testing beyond the single-point lines.
    """
    n = Z.n
    if n <= 2:
        return "n > 2", 0
    if d < 2:
        return "d >= 2", 0
    if Z.weight > n * d + 1:
        return f"(1) w(Z) = {Z.weight} > nd+1 = {n * d + 1}", 0
    if max(Z.multiplicities, default=0) > d + 1:
        return f"(2) a line through one point has weight {max(Z.multiplicities)} > d+1", 0
    spans = sorted(bounds.support_spans(Z), key=lambda L: L.dim)
    for L in spans:
        if L.dim == 1:
            w = weight_on(Z, L)
            if w > d + 1:
                return f"(2) line with w_L = {w} > d+1 = {d + 1}", 0
    equal = 0
    for L in spans:
        r = L.dim
        if not 2 <= r <= n - 1:
            continue
        w = weight_on(Z, L)
        if w > r * d + 2:
            return f"(3) {r}-plane with w_L = {w} > rd+2 = {r * d + 2}", equal
        if w == r * d + 2:
            rh1 = restricted_cohomology(Z, L, d).h1
            if rh1 != 0:
                return f"(3) {r}-plane with w_L = rd+2 and h1(L, I(d)) = {rh1}", equal
            equal += 1
    return "", equal


def check_conjecture_seg(Z: FatPointScheme, d: int) -> VerificationRecord:
    failed, equal = seg_conditions(Z, d)
    measured = h1(Z, d)
    if failed:
        return _record("conj-seg", INAPPLICABLE, "h1 = 0", measured, Z, reason=failed, d=d)
    verdict = HOLDS if measured == 0 else VIOLATED
    return _record("conj-seg", verdict, "h1 = 0", measured, Z, d=d, equality_planes=equal)


def rnc_criterion_hypotheses(n: int, d: int, mults: Sequence[int]) -> str:
    """First failed numerical hypothesis of the rational-normal-curve criterion, or ''."""
    ms = list(mults)
    s = len(ms)
    if ms != sorted(ms, reverse=True):
        return "m_1 >= ... >= m_s"
    if n < 2:
        return "n >= 2"
    if d < 4:
        return "d >= 4"
    if d < ms[0] + 2:
        return "d >= m_1 + 2"
    if s < 2 * n + 3:
        return "s >= 2n+3"
    if sum(ms) != n * d + 2:
        return "sum m_i = nd+2"
    if ms[0] + ms[2 * n + 1] > d:
        return "m_1 + m_{2n+2} <= d"
    if ms[0] + ms[1] > d + 1:
        return "m_1 + m_2 <= d+1"
    return ""


def check_rnc_criterion_scheme(Z: FatPointScheme, d: int) -> VerificationRecord:
    """h^1(I_Z(d)) = 0 iff the support lies on no rational normal curve."""
    failed = rnc_criterion_hypotheses(Z.n, d, Z.multiplicities)
    if not failed and not is_linearly_general(Z.points):
        failed = "points in linearly general position"
    measured = h1(Z, d)
    if failed:
        return _record("thm-rnc", INAPPLICABLE, None, measured, Z, reason=failed, d=d)
    on = is_on_rational_normal_curve(Z.points)
    predicted = "h1 > 0" if on else "h1 = 0"
    verdict = HOLDS if (measured == 0) != on else VIOLATED
    return _record("thm-rnc", verdict, predicted, measured, Z, d=d, on_rnc=on)


def check_rnc_criterion(n: int, d: int, mults: Sequence[int], on_rnc: bool, seed: int,
                      p: int = DEFAULT_PRIME) -> VerificationRecord:
    ms = tuple(mults)
    failed = rnc_criterion_hypotheses(n, d, ms)
    if failed:
        return _record("thm-rnc", INAPPLICABLE, None, None, None, reason=failed, n=n, d=d,
                       multiplicities=list(ms), seed=seed)
    pts = gen_rnc(n, len(ms), seed, p) if on_rnc else gen_general(n, len(ms), seed, p)
    rec = check_rnc_criterion_scheme(FatPointScheme(tuple(pts), ms, n, p), d)
    rec.params["seed"] = seed
    return rec


def check_rnc_sharpness_scheme(Z: FatPointScheme) -> VerificationRecord:
    """reg(Z) equals the Segre bound exactly."""
    bound = bounds.segre_bound_pn(Z.n, Z.multiplicities)
    reg = regularity_index(Z)
    verdict = HOLDS if reg == bound else VIOLATED
    return _record("rnc-sharp", verdict, bound, reg, Z)


def check_rnc_sharpness(n: int, s: int, mults: Sequence[int], seed: int,
                        p: int = DEFAULT_PRIME) -> VerificationRecord:
    if s < n + 3 or len(mults) != s:
        return _record("rnc-sharp", INAPPLICABLE, None, None, None, reason="s >= n+3", n=n, s=s)
    pts = gen_rnc(n, s, seed, p)
    ms = tuple(sorted(mults, reverse=True))
    rec = check_rnc_sharpness_scheme(FatPointScheme(tuple(pts), ms, n, p))
    rec.params["seed"] = seed
    return rec


def check_appendix_multiple(a: int, p: int = DEFAULT_PRIME) -> VerificationRecord:
    """Seven a-fold points of the explicit P^4 configuration at degree 2a-1:
    h^1 vanishes for a >= 3 and not for a = 2."""
    if a < 2:
        return _record("appendix-mult", INAPPLICABLE, None, None, None, reason="a >= 2", a=a)
    Z = gen_appendix(1, p, multiplicity=a)
    measured = h1(Z, 2 * a - 1)
    expect_zero = a >= 3
    verdict = HOLDS if (measured == 0) == expect_zero else VIOLATED
    return _record("appendix-mult", verdict, "h1 = 0" if expect_zero else "h1 > 0", measured, Z,
                   a=a, d=2 * a - 1)


def check_cone_scheme(Z: FatPointScheme, d: int) -> VerificationRecord:
    measured = h1(Z, d)
    verdict = HOLDS if measured == 1 else VIOLATED
    return _record("cone", verdict, 1, measured, Z, d=d)


def check_cone_example(n: int, d: int, seed: int, p: int = DEFAULT_PRIME) -> VerificationRecord:
    rec = check_cone_scheme(gen_cone_example(n, d, seed, p), d)
    rec.params["seed"] = seed
    return rec


def check_chain_inequality(tmax: int = 6, zmax: int = 12) -> VerificationRecord:
    """Exhaustive: 2 <= t <= tmax, zmax >= z > z_1 >= ... >= z_t > 0."""
    cases = failures = 0
    parities = set()
    first_failure = None
    for t in range(2, tmax + 1):
        for z in range(2, zmax + 1):
            for z1 in range(1, z):
                for rest in combinations_with_replacement(range(z1, 0, -1), t - 1):
                    zs = (z1,) + rest
                    cases += 1
                    parities.add((z + z1 + 1) % 2)
                    if not bounds.chain_inequality_holds(z, zs):
                        failures += 1
                        first_failure = first_failure or (t, z, zs)
    verdict = HOLDS if failures == 0 else VIOLATED
    return _record("chain-inequality", verdict, 0, failures, None,
                   reason=f"first failure {first_failure}" if first_failure else "",
                   cases=cases, parities=sorted(parities), tmax=tmax, zmax=zmax)


# --- replay -----------------------------------------------------------------


def replay(rec: VerificationRecord | dict) -> VerificationRecord:
    """Re-run the checker on a record's inline scheme."""
    if isinstance(rec, dict):
        rec = VerificationRecord.from_dict(rec)
    prm = rec.params
    if rec.claim == "chain-inequality":
        return check_chain_inequality(prm["tmax"], prm["zmax"])
    if rec.claim == "appendix-mult":
        return check_appendix_multiple(prm["a"], rec.prime)
    if rec.scheme is None:
        raise ValueError(f"record {rec.record_id} carries no scheme to replay")
    Z = scheme_from_dict(rec.scheme)
    if rec.claim == "gen-segre":
        return check_generalized_segre(Z, prm.get("offset", 0))
    if rec.claim == "conj-seg":
        return check_conjecture_seg(Z, prm["d"])
    if rec.claim == "thm-rnc":
        return check_rnc_criterion_scheme(Z, prm["d"])
    if rec.claim == "rnc-sharp":
        return check_rnc_sharpness_scheme(Z)
    if rec.claim == "cone":
        return check_cone_scheme(Z, prm["d"])
    raise ValueError(f"unknown claim {rec.claim!r}")


# --- sweeps -----------------------------------------------------------------


@dataclass
class SweepPlan:
    """A bounded, seeded family of checker runs.

    claim: gen-segre | conj-seg | thm-rnc | rnc-sharp | cone
    count: records to produce; with ``count_applicable`` only records that
        are not ``inapplicable`` count towards it (bounded by max_attempts).
    """

    claim: str
    count: int
    master_seed: int = 0
    ns: tuple[int, ...] = (3,)
    max_mult: int = 3
    geometries: tuple[str, ...] = ("general",)
    degrees: tuple[int, ...] = ()
    offset: int = 0
    count_applicable: bool = False
    max_attempts: int | None = None
    prime: int = DEFAULT_PRIME

    def to_dict(self) -> dict:
        return asdict(self)


GEN_SEGRE_GEOMETRIES = ("general", "hyperplane-n+2", "hyperplane-n+1")
CONJ_GEOMETRIES = ("general", "coplanar", "collinear", "heavy-plane")


def _mults_desc(rng: XorShift64Star, s: int, max_mult: int) -> tuple[int, ...]:
    return tuple(sorted((1 + rng.below(max_mult) for _ in range(s)), reverse=True))


def gen_segre_instance(plan: SweepPlan, seed: int) -> FatPointScheme:
    rng = XorShift64Star(seed)
    n = rng.choice(plan.ns)
    geom = rng.choice(plan.geometries)
    sub = rng.next_u64()
    if geom == "general":
        pts = gen_general(n, n + 3, sub, plan.prime)
    elif geom == "hyperplane-n+2":
        pts = gen_hyperplane_split(n, n + 2, 1, sub, plan.prime)
    elif geom == "hyperplane-n+1":
        pts = gen_hyperplane_split(n, n + 1, 2, sub, plan.prime)
    else:
        raise ValueError(f"unknown geometry {geom!r}")
    rng.shuffle(pts)
    return FatPointScheme(tuple(pts), _mults_desc(rng, n + 3, plan.max_mult), n, plan.prime)


def _points_in_span(rng: XorShift64Star, basis: list[PrimePoint], k: int, p: int) -> list[PrimePoint]:
    """k random points in the span of ``basis``, general inside it."""
    n = basis[0].n
    inner = gen_general(len(basis) - 1, k, rng.next_u64(), p)
    out = []
    for q in inner:
        c = [sum(lam * b.coords[j] for lam, b in zip(q.coords, basis)) % p for j in range(n + 1)]
        out.append(PrimePoint(tuple(c), p))
    return out


def conj_seg_instance(plan: SweepPlan, seed: int) -> tuple[FatPointScheme, int]:
    """Random scheme in P^n with some special position, and a degree d."""
    rng = XorShift64Star(seed)
    n = rng.choice(plan.ns)
    p = plan.prime
    geom = rng.choice(plan.geometries)
    s = n + 2 + rng.below(n + 4)
    frame = gen_general(n, n + 1, rng.next_u64(), p)
    if geom == "general":
        pts = gen_general(n, s, rng.next_u64(), p)
    elif geom == "coplanar":
        k = min(s, 4 + rng.below(3))
        pts = _points_in_span(rng, frame[:3], k, p)
        pts += gen_general(n, s - k, rng.next_u64(), p, start=[]) if s > k else []
    elif geom == "collinear":
        k = min(s, 3 + rng.below(2))
        pts = _points_in_span(rng, frame[:2], k, p)
        pts += gen_general(n, s - k, rng.next_u64(), p) if s > k else []
    elif geom == "heavy-plane":
        return _heavy_plane_instance(rng, n, p)
    else:
        raise ValueError(f"unknown geometry {geom!r}")
    uniq = list(dict.fromkeys(pts))
    rng.shuffle(uniq)
    ms = _mults_desc(rng, len(uniq), plan.max_mult)
    Z = FatPointScheme(tuple(uniq), ms, n, p)
    dmin = max(2, -(-(Z.weight - 1) // n))
    d = dmin + (rng.below(2) if rng.below(4) == 0 else 0)
    return Z, d


def _split_weight(rng: XorShift64Star, total: int, parts: int, cap: int) -> list[int] | None:
    """Random positive parts summing to total, each <= cap."""
    if not parts <= total <= parts * cap:
        return None
    out = [1] * parts
    for _ in range(total - parts):
        open_ = [i for i in range(parts) if out[i] < cap]
        out[rng.choice(open_)] += 1
    return out


def _heavy_plane_instance(rng: XorShift64Star, n: int, p: int) -> tuple[FatPointScheme, int]:
    """Plane carrying weight exactly 2d+2 (the boundary case of condition (3)),
    remaining weight at most nd+1 - (2d+2) spread off the plane."""
    d = 2 + rng.below(4)
    k = 4 + rng.below(3)
    plane = gen_general(2, k, rng.next_u64(), p)
    frame = gen_general(n, n + 1, rng.next_u64(), p)
    in_plane = [PrimePoint(tuple(sum(lam * b.coords[j] for lam, b in zip(q.coords, frame[:3])) % p
                                 for j in range(n + 1)), p) for q in plane]
    ms = _split_weight(rng, 2 * d + 2, k, (d + 1) // 2 + rng.below(2))
    if ms is None:
        ms = _split_weight(rng, 2 * d + 2, k, d)
    rest = n * d + 1 - (2 * d + 2)
    off_weight = rng.below(rest + 1)
    pts = list(in_plane)
    mults = list(ms)
    if off_weight:
        extra = 1 + rng.below(min(off_weight, n + 2))
        more = _split_weight(rng, off_weight, extra, d) or [1] * off_weight
        pts += gen_general(n, len(more), rng.next_u64(), p, start=[],
                           avoid=lambda q: any(q == x for x in in_plane))
        mults += more
    order = sorted(range(len(pts)), key=lambda i: -mults[i])
    Z = FatPointScheme(tuple(pts[i] for i in order), tuple(mults[i] for i in order), n, p)
    return Z, d


@lru_cache(maxsize=32)
def rnc_criterion_vectors(n: int, d: int, smax: int) -> tuple[tuple[int, ...], ...]:
    """All non-increasing vectors with 2n+3 <= s <= smax meeting the numerical hypotheses."""
    total = n * d + 2
    out = []

    def rec(prefix, remaining, cap, s):
        if len(prefix) == s:
            if remaining == 0 and not rnc_criterion_hypotheses(n, d, prefix):
                out.append(tuple(prefix))
            return
        slots = s - len(prefix)
        for m in range(min(cap, remaining - (slots - 1)), 0, -1):
            if m * slots < remaining:
                break
            rec(prefix + [m], remaining - m, m, s)

    for s in range(2 * n + 3, smax + 1):
        rec([], total, d - 2, s)
    return tuple(out)


def _rnc_criterion_task(plan: SweepPlan, seed: int) -> VerificationRecord:
    rng = XorShift64Star(seed)
    n = rng.choice(plan.ns)
    d = rng.choice(plan.degrees or (6,))
    vecs = rnc_criterion_vectors(n, d, 2 * n + 5)
    ms = rng.choice(vecs)
    on = rng.choice(plan.geometries) == "rnc"
    return check_rnc_criterion(n, d, ms, on, rng.next_u64(), plan.prime)


def _rnc_sharp_task(plan: SweepPlan, seed: int) -> VerificationRecord:
    rng = XorShift64Star(seed)
    n = rng.choice(plan.ns)
    s = rng.choice((n + 3, n + 4, 2 * n + 3))
    pattern = rng.choice(plan.geometries)
    if pattern == "simple":
        ms = (1,) * s
    elif pattern == "double":
        ms = (2,) * s
    else:
        ms = _mults_desc(rng, s, plan.max_mult)
    return check_rnc_sharpness(n, s, ms, rng.next_u64(), plan.prime)


def _cone_task(plan: SweepPlan, seed: int) -> VerificationRecord:
    rng = XorShift64Star(seed)
    n = rng.choice(plan.ns)
    d = rng.choice(plan.degrees or (2,))
    return check_cone_example(n, d, rng.next_u64(), plan.prime)


def _task_for(plan: SweepPlan) -> Callable[[SweepPlan, int], VerificationRecord]:
    if plan.claim == "gen-segre":
        return lambda pl, sd: check_generalized_segre(gen_segre_instance(pl, sd), pl.offset)
    if plan.claim == "conj-seg":
        return lambda pl, sd: check_conjecture_seg(*conj_seg_instance(pl, sd))
    if plan.claim == "thm-rnc":
        return _rnc_criterion_task
    if plan.claim == "rnc-sharp":
        return _rnc_sharp_task
    if plan.claim == "cone":
        return _cone_task
    raise ValueError(f"unknown claim {plan.claim!r}")


@dataclass
class SweepResult:
    plan: SweepPlan
    records: list[VerificationRecord]
    halted: bool = False

    @property
    def counts(self) -> dict[str, int]:
        c = Counter(r.verdict for r in self.records)
        return {v: c.get(v, 0) for v in (HOLDS, VIOLATED, INAPPLICABLE)}

    @property
    def violations(self) -> list[VerificationRecord]:
        return [r for r in self.records if r.verdict == VIOLATED]

    def summary(self) -> dict:
        return {"plan": self.plan.to_dict(), "counts": self.counts, "halted": self.halted,
                "records": len(self.records)}


def sweep(plan: SweepPlan, log_path: str | Path | None = None, workers: int = 1,
          stop_on_violation: bool = True) -> SweepResult:
    """Run a plan.  Record i uses seed derive_seed(master_seed, i).

    Records are produced in batches of ``workers``; output is sorted by
    record id regardless of scheduling.  By default the sweep halts after
    the batch containing the first violation.
    """
    task = _task_for(plan)
    limit = plan.max_attempts or (20 * plan.count if plan.count_applicable else plan.count)
    records: list[VerificationRecord] = []
    wanted = 0
    halted = False
    index = 0

    def run(i):
        rec = task(plan, derive_seed(plan.master_seed, i))
        rec.record_id = i
        rec.params.setdefault("seed", derive_seed(plan.master_seed, i))
        return rec

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        while wanted < plan.count and index < limit:
            batch = range(index, min(limit, index + max(1, workers)))
            index = batch.stop
            for rec in pool.map(run, batch):
                if wanted >= plan.count:
                    break
                records.append(rec)
                if not plan.count_applicable or rec.verdict != INAPPLICABLE:
                    wanted += 1
                if rec.verdict == VIOLATED:
                    log.error("violation: %s", rec.to_json())
                    halted = stop_on_violation
            if halted:
                break
    records.sort(key=lambda r: r.record_id)
    if log_path is not None:
        with open(log_path, "a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(rec.to_json() + "\n")
    return SweepResult(plan, records, halted)


def read_log(path: str | Path) -> list[VerificationRecord]:
    with open(path, encoding="utf-8") as fh:
        return [VerificationRecord.from_dict(json.loads(line)) for line in fh if line.strip()]
