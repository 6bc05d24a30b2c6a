"""Command-line interface: ``strengthlab <command> ...``.

Exit codes: 0 success, 1 input or usage error, 2 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import expsum, family, generators, suites, variety
from .config import DEFAULT_DELTA, RunConfig, default_threads
from .errors import BudgetExceeded, StrengthLabError
from .gf import FieldParams, field_create
from .poly import Polynomial, format_poly, parse, parse_lines

EXIT_OK, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2


class UsageError(StrengthLabError, ValueError):
    pass


def _field(text: str) -> FieldParams:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) not in (1, 2) or not all(p.isdigit() for p in parts):
        raise UsageError(f"--field expects P or P,S, got {text!r}")
    return field_create(int(parts[0]), int(parts[1]) if len(parts) == 2 else 1)


def _config(args) -> RunConfig:
    fld = getattr(args, "field", None) or "2"
    p, _, s = str(fld).partition(",")
    return RunConfig(
        p=int(p) if p.isdigit() else 0,
        s=int(s) if s.isdigit() else 1,
        threads=args.threads if args.threads is not None else default_threads(),
        budget=args.budget,
        samples=getattr(args, "samples", 100_000),
        delta=getattr(args, "delta", DEFAULT_DELTA),
        seed=getattr(args, "seed", 0),
        format=args.format,
    )


def _single(args, fld: FieldParams) -> Polynomial:
    if args.poly is not None:
        return parse(args.poly, fld, args.n)
    path = args.poly_file or getattr(args, "file", None)
    if path:
        polys = parse_lines(Path(path).read_text(), fld, args.n)
        if len(polys) != 1:
            raise UsageError(f"{path} holds {len(polys)} polynomials, expected one")
        return polys[0]
    raise UsageError("give --poly or --poly-file")


def _many(args, fld: FieldParams) -> list[Polynomial]:
    path = getattr(args, "file", None) or args.poly_file
    if path:
        polys = parse_lines(Path(path).read_text(), fld, args.n)
    elif args.poly is not None:
        polys = parse_lines(args.poly.replace(";", "\n"), fld, args.n)
    else:
        raise UsageError("give --family-file/--file, --poly-file or --poly")
    if not polys:
        raise UsageError("no polynomials in input")
    return polys


def _emit(obj, fmt: str = "json") -> None:
    if fmt == "text" and isinstance(obj, dict):
        for k, v in obj.items():
            print(f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    else:
        print(json.dumps(obj, sort_keys=True))


# --- commands ---

def cmd_bias(args) -> int:
    cfg = _config(args)
    fld = _field(args.field)
    P = _single(args, fld)
    rep = expsum.bias(P, "exact" if args.mode == "exact" else "mc", samples=cfg.samples, seed=cfg.seed,
                      delta=cfg.delta, budget=cfg.budget, threads=cfg.threads)
    ar = None
    if P.degree >= 1:
        try:
            ar = expsum.analytic_rank(P, rep.mode if rep.mode == "exact" else "mc", samples=cfg.samples,
                                      seed=cfg.seed, delta=cfg.delta, budget=cfg.budget,
                                      threads=cfg.threads)
        except BudgetExceeded:
            ar = None
    out = rep.to_json(ar)
    if args.no_timing:
        out["elapsed_ms"] = 0.0
    if args.gowers:
        out["gowers"] = {
            "d": args.gowers,
            "path": args.path,
            "norm": expsum.gowers_norm(P, args.gowers, args.path, budget=cfg.budget, threads=cfg.threads),
        }
    _emit(out, cfg.format)
    return EXIT_OK


def cmd_family(args) -> int:
    cfg = _config(args)
    fld = _field(args.field)
    if args.action == "search-shifts":
        if args.m is None or args.trials is None:
            raise UsageError("search-shifts needs --m, --trials and --seed")
        P = _single(args, fld)
        res = family.search_shifts(P, args.m, args.trials, cfg.seed, args.scorer,
                                   budget=cfg.budget, threads=cfg.threads)
        _emit(res.to_json(), cfg.format)
        return EXIT_OK
    fam = family.PolyFamily(_many(args, fld), allow_dependent=args.allow_dependent)
    if args.action == "rank":
        mode = "exact" if args.mode == "exact" else "mc"
        res = family.family_min_arank(fam, mode, budget=cfg.budget, threads=cfg.threads,
                                      samples=cfg.samples, seed=cfg.seed)
        _emit(res.to_json(), cfg.format)
    elif args.action == "fibers":
        dist = expsum.joint_distribution(fam, budget=cfg.budget, threads=cfg.threads)
        out = dist.to_json()
        out["equidistribution"] = family.equidistribution_check(
            fam, budget=cfg.budget, threads=cfg.threads, with_span_arank=False).to_json()
        _emit(out, cfg.format)
    return EXIT_OK


def cmd_variety(args) -> int:
    cfg = _config(args)
    fld = _field(args.field)
    polys = _many(args, fld)
    if args.action == "count":
        table = variety.PointCountTable(fld, polys[0].n)
        import time

        for s in range(1, args.smax + 1):
            t0 = time.perf_counter()
            if len(polys) <= polys[0].n:
                N, Ns = variety.count_both(polys, s, args.method, budget=cfg.budget, threads=cfg.threads)
            else:
                N, Ns = variety.count_points(polys, s, budget=cfg.budget, threads=cfg.threads), 0
            table.rows.append(variety.CountRow(s, fld.q**s, N, Ns, (time.perf_counter() - t0) * 1e3))
        if cfg.format == "csv":
            sys.stdout.write(table.to_csv(not args.no_timing))
        else:
            _emit({"rows": table.to_json(not args.no_timing)}, cfg.format)
        return EXIT_OK
    rep = variety.codim_singular(polys, args.smax, args.method, budget=cfg.budget, threads=cfg.threads)
    if cfg.format == "csv":
        sys.stdout.write(rep.table.to_csv(not args.no_timing))
    else:
        _emit(rep.to_json(not args.no_timing), cfg.format)
    return EXIT_OK


def cmd_gen(args) -> int:
    fld = _field(args.field)
    kind = args.kind
    if kind == "F":
        P, spec = generators.gen_F(args.n, args.s, fld), generators.spec_F(args.n, args.s)
    elif kind == "F_block":
        P = generators.gen_F_block(args.n, args.s, args.m, args.i, fld)
        spec = generators.spec_F_block(args.n, args.s, args.m, args.i)
    else:
        degrees = [int(x) for x in (args.degrees or "").split(",") if x.strip()]
        P = generators.gen_G(args.t, args.s, degrees, fld)
        spec = generators.spec_G(args.t, args.s, degrees)
    text = format_poly(P)
    side = spec.to_json()
    side["field"] = [fld.p, fld.s]
    if args.out:
        Path(args.out).write_text(text + "\n")
        Path(args.out + ".json").write_text(json.dumps(side, sort_keys=True, indent=1) + "\n")
    if args.format == "json":
        _emit({"polynomial": text, "sidecar": side})
    else:
        print(text)
    return EXIT_OK


def cmd_suite(args) -> int:
    names = suites.all_names() if args.name == "all" else [args.name]
    threads = args.threads if args.threads is not None else default_threads()
    results = [suites.run(n, threads) for n in names]
    if args.format == "json":
        _emit({"results": [r.to_json() for r in results], "passed": all(r.passed for r in results)})
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


def _common(p: argparse.ArgumentParser, field_required: bool = True) -> None:
    p.add_argument("--field", required=field_required, default=None if field_required else "2",
                   help="P or P,S for F_{P^S}")
    p.add_argument("--n", type=int, default=None, help="number of variables (default: inferred)")
    p.add_argument("--poly", default=None, help="polynomial text")
    p.add_argument("--poly-file", default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--budget", type=int, default=1 << 34)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strengthlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bias", help="bias, analytic rank and Gowers norm of one polynomial")
    _common(b)
    b.add_argument("--mode", choices=("exact", "mc"), default="exact")
    b.add_argument("--samples", type=int, default=100_000)
    b.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    b.add_argument("--gowers", type=int, default=None, metavar="D")
    b.add_argument("--path", choices=("definition", "tensor"), default="definition")
    b.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0")
    b.set_defaults(func=cmd_bias)

    f = sub.add_parser("family", help="span rank, fibers and shift search")
    f.add_argument("action", choices=("rank", "fibers", "search-shifts"))
    _common(f)
    f.add_argument("--family-file", "--file", dest="file", default=None)
    f.add_argument("--mode", choices=("exact", "mc"), default="exact")
    f.add_argument("--samples", type=int, default=100_000)
    f.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    f.add_argument("--m", type=int, default=None)
    f.add_argument("--trials", type=int, default=None)
    f.add_argument("--scorer", choices=("exact", "mc"), default="exact")
    f.add_argument("--allow-dependent", action="store_true")
    f.set_defaults(func=cmd_family)

    v = sub.add_parser("variety", help="point counts and singular-locus codimension")
    v.add_argument("action", choices=("count", "codim"))
    _common(v)
    v.add_argument("--family-file", "--file", dest="file", default=None)
    v.add_argument("--smax", type=int, default=1)
    v.add_argument("--method", choices=("pairing", "minors"), default="pairing")
    v.add_argument("--no-timing", action="store_true")
    v.set_defaults(func=cmd_variety)

    g = sub.add_parser("gen", help="determinant-sum generators")
    g.add_argument("kind", choices=("F", "F_block", "G"))
    g.add_argument("--field", default="2")
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--s", type=int, default=None)
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--i", type=int, default=1)
    g.add_argument("--t", type=int, default=None)
    g.add_argument("--degrees", default=None, help="comma-separated d_1,...,d_s")
    g.add_argument("--out", default=None, help="write PATH and PATH.json")
    g.add_argument("--format", choices=("json", "text"), default="text")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("suite", help="run an acceptance suite ('all' for every one)")
    s.add_argument("name", choices=suites.all_names() + ["all"])
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: BudgetExceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (StrengthLabError, ValueError, OSError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
