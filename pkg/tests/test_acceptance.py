"""End-to-end acceptance checks.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.  Each test both prints its line and asserts.
"""

import time

import numpy as np
import pytest

import fatpoints.cohomology as coh
import fatpoints.verify as verify
from fatpoints import bounds
from fatpoints.bounds import LinearSystemSpec
from fatpoints.cli import main, reproduce
from fatpoints.geometry import (
    FatPointScheme,
    gen_cone_example,
    gen_general,
    is_on_rational_normal_curve,
    scheme_from_dict,
)
from fatpoints.gfp import DenseMatrix, rank
from fatpoints.rng import XorShift64Star, derive_seed
from fatpoints.verify import HOLDS, INAPPLICABLE, VIOLATED, SweepPlan

P = 32749
SEEDS = 20


def report(number: int, title: str, ok: bool, detail: str = "") -> None:
    print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else ""))


def timed(fn, *args, **kw):
    t = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t


def failed_checks(rows):
    return [r for r in rows if r["status"] != "PASS"]


# --- instrumented sweep corpus (criteria 5, 6 and the Euler part of 11) -----------------


class EulerWatch:
    def __init__(self):
        self.calls = 0
        self.failures = []

    def wrap(self, real):
        def watched(Z, d):
            rep = real(Z, d)
            self.calls += 1
            spec = LinearSystemSpec(Z.n, d, Z.multiplicities)
            if rep.h0 - rep.h1 != bounds.vdim(spec) or min(rep.h0, rep.h1) < 0:
                self.failures.append((Z.multiplicities, d))
            return rep
        return watched


@pytest.fixture(scope="module")
def corpus():
    watch = EulerWatch()
    mp = pytest.MonkeyPatch()
    real = coh.cohomology
    mp.setattr(coh, "cohomology", watch.wrap(real))
    mp.setattr(verify, "cohomology", watch.wrap(real))
    try:
        gen_plan = SweepPlan("gen-segre", 500, master_seed=2024, ns=(3, 4, 5), max_mult=5,
                             geometries=verify.GEN_SEGRE_GEOMETRIES)
        gen, gen_t = timed(verify.sweep, gen_plan, stop_on_violation=False)
        conj_plan = SweepPlan("conj-seg", 500, master_seed=2024, ns=(3,),
                              geometries=verify.CONJ_GEOMETRIES, count_applicable=True)
        conj, conj_t = timed(verify.sweep, conj_plan, stop_on_violation=False)
    finally:
        mp.undo()
    return {"gen": gen, "gen_t": gen_t, "conj": conj, "conj_t": conj_t, "watch": watch}


# --- 1 ------------------------------------------------------------------------------------


@pytest.mark.parametrize("which,d,shape,rk", [(1, 5, [105, 126], 105), (2, 3, [48, 56], 48)])
def test_criterion_01_appendix(which, d, shape, rk):
    rows, dt = timed(reproduce, f"appendix{which}")
    by = {r["check"].split(" =")[0]: r["measured"] for r in rows}
    ok = (not failed_checks(rows) and by["matrix shape"] == shape and by["rank"] == rk
          and by[f"h1 at d={d}"] == 0 and dt < 1.0)
    report(1, f"appendix{which}: shape {shape}, rank {rk}, h1 0 at d={d}", ok, f"{dt:.3f}s")
    assert ok


# --- 2, 3 ---------------------------------------------------------------------------------


def test_criterion_02_seven_double_points_p3():
    rows, dt = timed(reproduce, "ex-1.2", seeds=SEEDS)
    regs = {r["measured"] for r in rows if r["check"].endswith(" reg")}
    h1s = {r["measured"] for r in rows if "h1" in r["check"]}
    ms = (2,) * 7
    ok = (not failed_checks(rows) and regs == {4} and h1s == {0}
          and bounds.segre_bound_pn(3, ms) == 5 and bounds.bdp_bound(3, ms) == 4 and dt < 5.0)
    report(2, "7 double points in P^3: h1(4)=0, reg 4, Segre 5, BDP 4 over 20 seeds", ok, f"{dt:.2f}s")
    assert ok


def test_criterion_03_examples():
    t = time.perf_counter()
    rows_a = reproduce("ex-3.8", seeds=SEEDS)
    rows_b = reproduce("ex-3.9", seeds=SEEDS)
    dt = time.perf_counter() - t
    h0 = {r["measured"] for r in rows_a if "h0" in r["check"]}
    regs = {r["measured"] for r in rows_a + rows_b if r["check"].endswith(" reg")}
    ok = (not failed_checks(rows_a + rows_b) and h0 == {3} and regs == {5}
          and bounds.segre_bound_p2((2,) * 6) == 6 and bounds.segre_bound_pn(3, (2,) * 9) == 6
          and dt < 5.0)
    report(3, "L_{2,5}(2^6): h0 3, h1 0, reg 5 vs 6; L_{3,5}(2^9): h1 0, reg 5 vs 6", ok, f"{dt:.2f}s")
    assert ok


# --- 4 ------------------------------------------------------------------------------------


def test_criterion_04_exceptional_case():
    h1s, regs = [], []
    for i in range(SEEDS):
        Z = FatPointScheme(tuple(gen_general(4, 7, derive_seed(4, i))), (2,) * 7, 4, P)
        h1s.append(verify.h1(Z, 3))
        regs.append(coh.regularity_index(Z))
    ok = min(h1s) > 0 and set(regs) == {4} and (14 + 2) // 4 == 4
    report(4, "7 double points in P^4: h1(3) > 0 and reg 4 over 20 seeds", ok, f"h1 values {sorted(set(h1s))}")
    assert ok


# --- 5, 6 ---------------------------------------------------------------------------------


def test_criterion_05_generalized_segre_sweep(corpus):
    res = corpus["gen"]
    geoms, ns = set(), set()
    for rec in res.records:
        ns.add(scheme_n(rec))
        geoms.add(len(rec.scheme["points"]) - scheme_n(rec))
    ok = (len(res.records) == 500 and res.counts[VIOLATED] == 0 and res.counts[HOLDS] == 500
          and ns == {3, 4, 5} and geoms == {3} and corpus["gen_t"] < 600
          and max(max(r.scheme["multiplicities"]) for r in res.records) <= 5)
    report(5, "reg <= generalized Segre on 500 configs of n+3 points, n in {3,4,5}", ok,
           f"{res.counts}, {corpus['gen_t']:.1f}s")
    assert ok


def scheme_n(rec):
    return len(rec.scheme["points"][0]) - 1


def test_criterion_06_modified_segre_n3(corpus):
    res = corpus["conj"]
    applicable = [r for r in res.records if r.verdict != INAPPLICABLE]
    skipped = [r for r in res.records if r.verdict == INAPPLICABLE]
    ok = (len(applicable) == 500 and res.counts[VIOLATED] == 0
          and all(r.measured == 0 for r in applicable)
          and all(r.reason for r in skipped))
    report(6, "h1(I_Z(d)) = 0 on 500 applicable instances in P^3", ok,
           f"{res.counts}, {corpus['conj_t']:.1f}s")
    assert ok


# --- 7 ------------------------------------------------------------------------------------


def test_criterion_07_rnc_criterion_both_directions():
    on_pos = off_zero = total_on = total_off = 0
    bad = []
    for d in (6, 7):
        vecs = verify.rnc_criterion_vectors(4, d, 2 * 4 + 5)
        assert vecs
        rng = XorShift64Star(derive_seed(7, d))
        for i in range(SEEDS // 2):
            rec = verify.check_rnc_criterion(4, d, rng.choice(vecs), True, derive_seed(70 + d, i))
            total_on += 1
            on_pos += rec.verdict == HOLDS and rec.measured > 0
            bad += [rec] if rec.verdict == VIOLATED else []
        for i in range(50):
            ms = rng.choice(vecs)
            seed = derive_seed(700 + d, i)
            rec = verify.check_rnc_criterion(4, d, ms, False, seed)
            pts = gen_general(4, len(ms), seed)
            total_off += 1
            off_zero += rec.verdict == HOLDS and rec.measured == 0 and not is_on_rational_normal_curve(pts)
            bad += [rec] if rec.verdict == VIOLATED else []
    ok = not bad and on_pos == total_on and off_zero == total_off
    report(7, "n=4, d in {6,7}: on-RNC h1 > 0, off-RNC (50 seeds per d) h1 = 0", ok,
           f"on {on_pos}/{total_on}, off {off_zero}/{total_off}")
    assert ok


# --- 8 ------------------------------------------------------------------------------------


def test_criterion_08_rnc_sharpness():
    results = []
    for n in (2, 3):
        for s in (n + 3, n + 4, 2 * n + 3):
            for m in (1, 2):
                rec = verify.check_rnc_sharpness(n, s, (m,) * s, derive_seed(8, 10 * n + s + 100 * m))
                results.append((n, s, m, rec.verdict, rec.measured, rec.predicted))
    ok = all(v == HOLDS and meas == pred for *_, v, meas, pred in results)
    report(8, "points on a rational normal curve: reg equals the Segre bound", ok,
           f"{len(results)} cases")
    assert ok


# --- 9 ------------------------------------------------------------------------------------


def test_criterion_09_cone_construction():
    values = []
    for n, d in ((3, 2), (3, 3), (4, 2)):
        for i in range(SEEDS):
            Z = gen_cone_example(n, d, derive_seed(9, i))
            values.append(verify.h1(Z, d))
    ok = values == [1] * 60
    report(9, "cone construction: h1(I_Z(d)) = 1 for 3 cases x 20 seeds", ok, f"values {sorted(set(values))}")
    assert ok


# --- 10 -----------------------------------------------------------------------------------


def test_criterion_10_chain_inequality():
    rec, dt = timed(verify.check_chain_inequality)
    ok = rec.verdict == HOLDS and rec.measured == 0 and rec.params["parities"] == [0, 1] and dt < 1.0
    report(10, "chain inequality over the full grid, both parities", ok, f"{rec.params['cases']} cases, {dt:.3f}s")
    assert ok


# --- 11 -----------------------------------------------------------------------------------


def test_criterion_11a_euler_identity_on_corpus(corpus):
    w = corpus["watch"]
    ok = w.calls > 1000 and not w.failures
    report(11, "Euler identity on every cohomology call of the sweep corpus", ok, f"{w.calls} calls")
    assert ok


def test_criterion_11b_degree_monotonicity(corpus):
    bad = checked = 0
    # measured is reg(Z) here; past reg + 1 every h1 is 0
    recs = corpus["gen"].records[:120]
    for rec in recs:
        Z = scheme_from_dict(rec.scheme)
        m1 = Z.multiplicities[0]
        prev = None
        for d in range(max(0, m1 - 1), rec.measured + 2):
            h = coh.cohomology(Z, d).h1
            bad += prev is not None and h > prev
            prev = h
            checked += 1
    ok = bad == 0
    report(11, "h1 non-increasing in d from m1-1 on", ok, f"{checked} degrees, {len(recs)} schemes")
    assert ok


def test_criterion_11c_subscheme_monotonicity():
    failures, pairs, strict = [], 0, 0
    i = 0
    while pairs < 200:
        rng = XorShift64Star(derive_seed(1142, i))
        i += 1
        n = 2 + rng.below(3)
        s = 2 + rng.below(n + 4)
        ms = tuple(sorted((1 + rng.below(4) for _ in range(s)), reverse=True))
        pts = gen_general(n, s, rng.next_u64())
        Z = FatPointScheme(tuple(pts), ms, n, P)
        lowered = [max(0, m - rng.below(m + 1)) for m in ms]
        if lowered == list(ms) or not any(lowered):
            continue
        keep = [j for j in range(s) if lowered[j] > 0]
        W = FatPointScheme(tuple(pts[j] for j in keep), tuple(lowered[j] for j in keep), n, P)
        rz, rw = coh.regularity_index(Z), coh.regularity_index(W)
        d = 1 + rng.below(rz + 1)
        hz, hw = verify.h1(Z, d), verify.h1(W, d)
        pairs += 1
        strict += hw < hz
        if (hw > 0 and hz == 0) or hw > hz + (Z.degree - W.degree) or rw > rz:
            failures.append((ms, lowered, d))
    ok = not failures
    report(11, "subscheme monotonicity on 200 (W in Z) pairs", ok, f"{strict} strict")
    assert ok


def test_criterion_11d_linear_dimension_matches():
    agree = nontrivial = i = 0
    failures = []
    while agree + len(failures) < 100:
        rng = XorShift64Star(derive_seed(1144, i))
        i += 1
        n = 2 + rng.below(3)
        s = n + 3 + rng.below(3)
        d = 2 + rng.below(5)
        ms = tuple(sorted((1 + rng.below(d) for _ in range(s)), reverse=True))
        spec = LinearSystemSpec(n, d, ms)
        if not bounds.bdp_applicable(spec)[0] or bounds.lvdim(spec) < 0:
            continue
        got = coh.system_dimension(spec, gen_general(n, s, rng.next_u64()))
        nontrivial += bounds.lvdim(spec) != bounds.vdim(spec)
        if got == bounds.ldim(spec).value:
            agree += 1
        else:
            failures.append((n, d, ms, got))
    ok = not failures and nontrivial > 0
    report(11, "ldim equals measured dimension on 100 only-linearly-obstructed systems", ok,
           f"{nontrivial} with base-locus correction")
    assert ok


# --- 12 -----------------------------------------------------------------------------------


def test_criterion_12_performance():
    rng = np.random.default_rng(12)
    data = rng.integers(0, P, size=(2000, 2000), dtype=np.int64)
    M = DenseMatrix(data, P)
    r, dt = timed(rank, M)
    t = time.perf_counter()
    main(["reproduce", "appendix1", "--out", "/dev/null"])
    main(["reproduce", "appendix2", "--out", "/dev/null"])
    small = time.perf_counter() - t
    ok = r == 2000 and dt < 5.0 and small < 1.0
    report(12, "rank of a random 2000x2000 matrix over GF(32749)", ok,
           f"{dt:.2f}s, appendix pair {small:.3f}s")
    assert ok
