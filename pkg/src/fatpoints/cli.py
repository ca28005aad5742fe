"""Command-line front end: cohomology, regindex, verify, reproduce.

Exit codes: 0 ok, 1 violation or failed reproduction, 2 usage or guard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import bounds, verify
from .cohomology import RegularityNotReached, cohomology, conditions_matrix, regularity_index
from .combinatorics import binomial
from .geometry import (
    FatPointScheme,
    GenerationFailed,
    GuardExceeded,
    Unsupported,
    gen_appendix,
    gen_cone_example,
    gen_general,
    gen_hyperplane_split,
    gen_rnc,
    load_scheme,
)
from .gfp import DEFAULT_PRIME, FieldContext, FieldTooSmallError
from .rng import derive_seed

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

GENERATORS = ("general", "rnc", "hyperplane", "cone", "appendix1", "appendix2")
CLAIMS = ("gen-segre", "conj-seg", "thm-rnc", "rnc-sharp", "cone", "appendix-mult", "chain-inequality")
TARGETS = ("appendix1", "appendix2", "ex-1.2", "ex-3.8", "ex-3.9", "ex-4.8", "tables", "lemma-2.4")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    scheme_file: str | None = None
    generator: str | None = None
    n: int | None = None
    s: int | None = None
    mults: tuple[int, ...] = ()
    prime: int | None = None  # None: a scheme file keeps its own prime
    seed: int = 0
    degrees: tuple[int, ...] = ()
    fmt: str = "json"
    out: str | None = None
    paranoid: bool = False
    primes: tuple[int, ...] = ()
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command in ("cohomology", "regindex") or (
            self.command == "verify" and self.extra.get("count") is None
            and self.extra.get("claim") not in ("appendix-mult", "chain-inequality")
        ):
            if (self.scheme_file is None) == (self.generator is None):
                raise UsageError("give exactly one of --scheme FILE or --gen KIND")
        for q in self.primes or (self.field_prime,):
            ctx = FieldContext(q)
            if self.degrees:
                ctx.require_above(max(self.degrees))


    @property
    def field_prime(self) -> int:
        return self.prime if self.prime is not None else DEFAULT_PRIME


# --- argument parsing ------------------------------------------------------


def parse_mults(text: str) -> tuple[int, ...]:
    """'2,2,1' or '2^7' or '3,2^4'."""
    out: list[int] = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        if "^" in tok:
            m, k = tok.split("^")
            out.extend([int(m)] * int(k))
        else:
            out.append(int(tok))
    if not out or any(m < 1 for m in out):
        raise argparse.ArgumentTypeError(f"bad multiplicity list {text!r}")
    return tuple(out)


def parse_degrees(text: str) -> tuple[int, ...]:
    """'A..B' inclusive; an empty range (B < A) is allowed."""
    if ".." not in text:
        raise argparse.ArgumentTypeError("degree range must look like A..B")
    a, b = text.split("..")
    return tuple(range(int(a), int(b) + 1))


def parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t)


def _common(p: argparse.ArgumentParser, scheme: bool = True) -> None:
    p.add_argument("--prime", type=int, default=None,
                   help=f"field characteristic (default {DEFAULT_PRIME}, or the scheme file's)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", dest="fmt", choices=("json", "csv", "human"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    if scheme:
        p.add_argument("--scheme", dest="scheme_file", help="scheme JSON file")
        p.add_argument("--gen", dest="generator", choices=GENERATORS)
        p.add_argument("--n", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--mults", type=parse_mults, default=())
        g = p.add_mutually_exclusive_group()
        g.add_argument("--degree", type=int)
        g.add_argument("--degrees", type=parse_degrees)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fatpoints", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="h0/h1 of I_Z(d) over a range of degrees")
    _common(p)
    p.add_argument("--primes", type=parse_int_list, default=(),
                   help="comma-separated primes; reports per prime plus agreement")

    p = sub.add_parser("regindex", help="regularity index and every applicable bound")
    _common(p)
    p.add_argument("--paranoid", action="store_true", help="re-check vanishing at d+1")

    p = sub.add_parser("verify", help="run one checker, or a seeded sweep with --count")
    _common(p)
    p.add_argument("--claim", choices=CLAIMS, required=True)
    p.add_argument("--count", type=int, help="sweep size (omit for a single instance)")
    p.add_argument("--ns", type=parse_int_list, default=(3,))
    p.add_argument("--max-mult", type=int, default=3)
    p.add_argument("--geometries", type=lambda t: tuple(t.split(",")), default=None)
    p.add_argument("--sweep-degrees", type=parse_int_list, default=())
    p.add_argument("--offset", type=int, default=0, help="shift the predicted bound (self-test)")
    p.add_argument("--count-applicable", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--keep-going", action="store_true", help="do not halt on the first violation")
    p.add_argument("--log", help="append JSONL records here")
    p.add_argument("--a", type=int, default=3, help="multiplicity for appendix-mult")

    p = sub.add_parser("reproduce", help="recompute a published value and compare")
    _common(p, scheme=False)
    p.add_argument("target", choices=TARGETS + ("all",))
    p.add_argument("--seeds", type=int, default=20)
    return ap


def config_from_args(args: argparse.Namespace) -> RunConfig:
    degrees: tuple[int, ...] = ()
    if getattr(args, "degree", None) is not None:
        degrees = (args.degree,)
    elif getattr(args, "degrees", None) is not None:
        degrees = args.degrees
    known = {"command", "scheme_file", "generator", "n", "s", "mults", "prime", "seed",
             "fmt", "out", "paranoid", "primes", "degree", "degrees"}
    extra = {k: v for k, v in vars(args).items() if k not in known}
    return RunConfig(
        command=args.command,
        scheme_file=getattr(args, "scheme_file", None),
        generator=getattr(args, "generator", None),
        n=getattr(args, "n", None),
        s=getattr(args, "s", None),
        mults=tuple(getattr(args, "mults", ()) or ()),
        prime=args.prime,
        seed=args.seed,
        degrees=degrees,
        fmt=args.fmt,
        out=args.out,
        paranoid=getattr(args, "paranoid", False),
        primes=tuple(getattr(args, "primes", ()) or ()),
        extra=extra,
    )


# --- scheme construction ---------------------------------------------------


def _need(value, flag: str, kind: str):
    if value is None:
        raise UsageError(f"--gen {kind} needs {flag}")
    return value


def _mults_for(cfg: RunConfig, s: int) -> tuple[int, ...]:
    if not cfg.mults:
        return (1,) * s
    if len(cfg.mults) == 1:
        return cfg.mults * s
    if len(cfg.mults) != s:
        raise UsageError(f"--mults has {len(cfg.mults)} entries but s = {s}")
    return cfg.mults


def build_scheme(cfg: RunConfig, prime: int | None = None) -> FatPointScheme:
    if cfg.scheme_file is not None:
        return load_scheme(cfg.scheme_file, prime=prime or cfg.prime)
    p = prime or cfg.field_prime
    kind = cfg.generator
    if kind == "appendix1":
        return gen_appendix(1, p, multiplicity=cfg.mults[0] if cfg.mults else None)
    if kind == "appendix2":
        return gen_appendix(2, p, multiplicity=cfg.mults[0] if cfg.mults else None)
    n = _need(cfg.n, "--n", kind)
    if kind == "cone":
        if len(cfg.degrees) != 1:
            raise UsageError("--gen cone needs a single --degree d")
        return gen_cone_example(n, cfg.degrees[0], cfg.seed, p)
    s = cfg.s if cfg.s is not None else (len(cfg.mults) if len(cfg.mults) > 1 else None)
    s = _need(s, "--s (or a full --mults list)", kind)
    ms = tuple(sorted(_mults_for(cfg, s), reverse=True))
    if kind == "general":
        pts = gen_general(n, s, cfg.seed, p)
    elif kind == "rnc":
        pts = gen_rnc(n, s, cfg.seed, p)
    elif kind == "hyperplane":
        pts = gen_hyperplane_split(n, min(s, n + 2), max(0, s - n - 2), cfg.seed, p)
    else:
        raise UsageError(f"unknown generator {kind!r}")
    return FatPointScheme(tuple(pts), ms, n, p)


# --- commands ----------------------------------------------------------------


def cmd_cohomology(cfg: RunConfig) -> tuple[dict, int]:
    schemes = [build_scheme(cfg, q) for q in cfg.primes] if cfg.primes else [build_scheme(cfg)]
    per_prime = {Z.p: [cohomology(Z, d).to_dict() for d in cfg.degrees] for Z in schemes}
    first = per_prime[schemes[0].p]
    if len(schemes) == 1:
        return {"reports": first}, EXIT_OK
    ranks = [[r["rank"] for r in reps] for reps in per_prime.values()]
    return {"reports": first, "primes": list(per_prime), "agree": all(r == ranks[0] for r in ranks),
            "by_prime": {str(q): v for q, v in per_prime.items()}}, EXIT_OK


def cmd_regindex(cfg: RunConfig) -> tuple[dict, int]:
    Z = build_scheme(cfg)
    reg = regularity_index(Z, paranoid=cfg.paranoid)
    rep = bounds.bound_report(Z, reg).to_dict()
    rep["prime"] = Z.p
    rep["s"] = Z.s
    rep["weight"] = Z.weight
    return rep, EXIT_OK


def _strip_time(rec: verify.VerificationRecord) -> dict:
    d = rec.to_dict()
    d.pop("timestamp", None)
    return d


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    x = cfg.extra
    claim = x["claim"]
    if x.get("count") is not None:
        geoms = x.get("geometries") or {
            "gen-segre": verify.GEN_SEGRE_GEOMETRIES,
            "conj-seg": verify.CONJ_GEOMETRIES,
            "thm-rnc": ("rnc", "general"),
            "rnc-sharp": ("simple", "double"),
            "cone": ("cone",),
        }.get(claim)
        if geoms is None:
            raise UsageError(f"claim {claim} has no sweep; drop --count")
        plan = verify.SweepPlan(
            claim=claim, count=x["count"], master_seed=cfg.seed, ns=tuple(x["ns"]),
            max_mult=x["max_mult"], geometries=tuple(geoms), degrees=tuple(x["sweep_degrees"]),
            offset=x["offset"], count_applicable=x["count_applicable"], prime=cfg.field_prime,
        )
        res = verify.sweep(plan, x.get("log"), workers=x["workers"],
                           stop_on_violation=not x["keep_going"])
        out = res.summary()
        out["violations"] = [_strip_time(r) for r in res.violations]
        return out, (EXIT_VIOLATION if res.violations else EXIT_OK)

    if claim == "chain-inequality":
        rec = verify.check_chain_inequality()
    elif claim == "appendix-mult":
        rec = verify.check_appendix_multiple(x["a"], cfg.field_prime)
    else:
        Z = build_scheme(cfg)
        d = cfg.degrees[0] if cfg.degrees else None
        if claim == "gen-segre":
            rec = verify.check_generalized_segre(Z, x["offset"])
        elif claim == "rnc-sharp":
            rec = verify.check_rnc_sharpness_scheme(Z)
        else:
            if d is None:
                raise UsageError(f"--claim {claim} needs --degree")
            rec = {"conj-seg": verify.check_conjecture_seg, "thm-rnc": verify.check_rnc_criterion_scheme,
                   "cone": verify.check_cone_scheme}[claim](Z, d)
    if x.get("log"):
        with open(x["log"], "a", encoding="utf-8") as fh:
            fh.write(rec.to_json() + "\n")
    return _strip_time(rec), (EXIT_VIOLATION if rec.verdict == verify.VIOLATED else EXIT_OK)


# --- reproduction targets ----------------------------------------------------


def _check(rows: list, target: str, what: str, expected, measured) -> None:
    rows.append({"target": target, "check": what, "expected": expected, "measured": measured,
                 "status": "PASS" if expected == measured else "FAIL"})


def _appendix(rows, which: int, d: int, p: int, expected_rank: int, formula: str) -> None:
    Z = gen_appendix(which, p)
    m = conditions_matrix(Z, d)
    rep = cohomology(Z, d)
    t = f"appendix{which}"
    _check(rows, t, "matrix shape", [expected_rank, binomial(Z.n + d, Z.n)], list(m.shape))
    _check(rows, t, f"rank = {formula}", expected_rank, rep.rank)
    _check(rows, t, f"h1 at d={d}", 0, rep.h1)


def _general_double(rows, target, n, s, d_zero, reg, segre, bdp, seeds, master, p,
                    planar=None, h0=None):
    for i in range(seeds):
        Z = FatPointScheme(tuple(gen_general(n, s, derive_seed(master, i), p)), (2,) * s, n, p)
        rep = cohomology(Z, d_zero)
        r = regularity_index(Z)
        tag = f"seed#{i}"
        _check(rows, target, f"{tag} h1 at d={d_zero}", 0, rep.h1)
        if h0 is not None:
            _check(rows, target, f"{tag} h0 at d={d_zero}", h0, rep.h0)
        _check(rows, target, f"{tag} reg", reg, r)
    ms = (2,) * s
    _check(rows, target, "segre bound (P^n)", segre, bounds.segre_bound_pn(n, ms))
    if planar is not None:
        _check(rows, target, "segre bound (plane)", planar, bounds.segre_bound_p2(ms))
    if bdp is not None:
        _check(rows, target, "bdp bound", bdp, bounds.bdp_bound(n, ms))


def reproduce(target: str, p: int = DEFAULT_PRIME, seeds: int = 20, master: int = 0) -> list[dict]:
    rows: list[dict] = []
    if target == "appendix1":
        _appendix(rows, 1, 5, p, 7 * binomial(6, 4), "7*C(6,4)")
    elif target == "appendix2":
        _appendix(rows, 2, 3, p, 8 * 6, "8*6")
    elif target == "ex-1.2":
        _general_double(rows, target, 3, 7, 4, 4, 5, 4, seeds, master, p)
    elif target == "ex-3.8":
        _general_double(rows, target, 2, 6, 5, 5, 6, None, seeds, master, p, planar=6, h0=3)
    elif target == "ex-3.9":
        _general_double(rows, target, 3, 9, 5, 5, 6, 5, seeds, master, p)
    elif target == "ex-4.8":
        for n, d in ((3, 2), (3, 3), (4, 2)):
            for i in range(seeds):
                Z = gen_cone_example(n, d, derive_seed(master, i), p)
                _check(rows, target, f"n={n} d={d} seed#{i} h1", 1, cohomology(Z, d).h1)
    elif target == "tables":
        for n in range(2, 9):
            for s in range(n + 4, 2 * n + 6):
                for w in range(n * 2, n * 7):
                    row = bounds.compare_bounds(n, s, w)
                    _check(rows, target, f"n={n} s={s} w={w} table {row.table} [{row.column}]",
                           [row.segre_offset, row.bdp_offset],
                           list(bounds.direct_offsets(n, s, w)))
    elif target == "lemma-2.4":
        rec = verify.check_chain_inequality()
        _check(rows, target, f"violations over {rec.params['cases']} cases", 0, rec.measured)
        _check(rows, target, "both parities of eta covered", [0, 1], rec.params["parities"])
    else:
        raise UsageError(f"unknown target {target!r}")
    return rows


def cmd_reproduce(cfg: RunConfig) -> tuple[dict, int]:
    target = cfg.extra["target"]
    targets = TARGETS if target == "all" else (target,)
    rows = []
    for t in targets:
        rows.extend(reproduce(t, cfg.field_prime, cfg.extra["seeds"], cfg.seed))
    failed = sum(r["status"] == "FAIL" for r in rows)
    out = {"targets": list(targets), "checks": rows, "failed": failed,
           "status": "FAIL" if failed else "PASS"}
    return out, (EXIT_VIOLATION if failed else EXIT_OK)


COMMANDS = {"cohomology": cmd_cohomology, "regindex": cmd_regindex,
            "verify": cmd_verify, "reproduce": cmd_reproduce}


# --- rendering ---------------------------------------------------------------


def render_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    if rows:
        cols = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def render_csv(command: str, obj: dict) -> str:
    if command == "cohomology":
        return _csv(obj["reports"])
    if command == "reproduce":
        return _csv(obj["checks"])
    if command == "regindex":
        flat = {k: v for k, v in obj.items() if k != "holds"}
        flat.update({f"holds_{k}": v for k, v in obj["holds"].items()})
        return _csv([flat])
    flat = {k: v for k, v in obj.items() if k not in ("scheme", "violations")}
    return _csv([flat])


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(c) for c in header]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = [" | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render_human(command: str, obj: dict) -> str:
    if command == "cohomology":
        hdr = ("d", "rank", "h0", "h1", "degZ", "prime")
        reps = [r for v in obj["by_prime"].values() for r in v] if "by_prime" in obj else obj["reports"]
        return _table(hdr, [[r["degree"], r["rank"], r["h0"], r["h1"], r["degZ"], r["prime"]]
                            for r in reps]) + (
            f"primes agree: {obj['agree']}\n" if "agree" in obj else "")
    if command == "regindex":
        head = (f"P^{obj['n']}  multiplicities {obj['multiplicities']}  w = {obj['weight']}  "
                f"measured reg = {obj['measured_reg']}\n")
        rows = [[name, obj[name], obj[name] - obj["measured_reg"], "yes" if ok else "NO"]
                for name, ok in obj["holds"].items()]
        return head + _table(("bound", "value", "value - reg", "holds"), rows)
    if command == "reproduce":
        rows = [[r["target"], r["check"], r["expected"], r["measured"], r["status"]]
                for r in obj["checks"]]
        return _table(("target", "check", "expected", "measured", "status"), rows) + (
            f"{obj['status']} ({obj['failed']} failed)\n")
    if "counts" in obj:
        c = obj["counts"]
        return (f"{obj['plan']['claim']}: {obj['records']} records, holds {c['holds']}, "
                f"violated {c['violated']}, inapplicable {c['inapplicable']}"
                + (" (halted)" if obj["halted"] else "") + "\n")
    msg = f"{obj['claim']}: {obj['verdict']}  predicted {obj['predicted']}  measured {obj['measured']}"
    return msg + (f"  [{obj['reason']}]" if obj["reason"] else "") + "\n"


def render(cfg: RunConfig, obj: dict) -> str:
    if cfg.fmt == "csv":
        return render_csv(cfg.command, obj)
    if cfg.fmt == "human":
        return render_human(cfg.command, obj)
    return render_json(obj)


def run(cfg: RunConfig) -> tuple[str, int]:
    cfg.validate()
    obj, code = COMMANDS[cfg.command](cfg)
    return render(cfg, obj), code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        text, code = run(cfg)
    except (UsageError, FieldTooSmallError, GuardExceeded, Unsupported, GenerationFailed,
            FileNotFoundError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"fatpoints {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegularityNotReached, verify.InternalInconsistency) as exc:
        print(f"fatpoints {cfg.command}: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
