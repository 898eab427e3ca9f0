"""Command-line front end.

Subcommands: ``solve`` (one instance document), ``bench`` (seeded sweeps with
CSV output), ``verify`` (named verification suites), ``enumerate`` (write an
exhaustive instance corpus). The environment variable TARSKI_DEBUG_CHECKS
(0/1) toggles debug invariant assertions; benchmark measurements force them
off locally either way.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import ALGORITHMS, FAMILIES, format_summary, run_sweep, write_csv
from .errors import InstanceInvalidError, LoadError, UsageError
from .instances import (
    enumerate_monotone_maps,
    instantiate,
    parse_instance,
    spec_to_dict,
)
from .lattice import Box
from .oracles import FnOracle
from .star import BASE2D_CHOICES, solve_star
from .tarski import brute_force_fixed_point, solve_tarski, solve_tarski_dqy
from .verify import CLI_SUITES


def _parse_int_token(tok: str) -> int:
    tok = tok.strip()
    if "^" in tok:
        base, exp = tok.split("^", 1)
        return int(base) ** int(exp)
    return int(tok)


def parse_n_grid(spec: str) -> list:
    """Grid syntax: ``LO..HI`` (doubling), ``LO..HIxSTEP`` (geometric step),
    or a comma list; tokens may use ``2^K``."""
    if ".." in spec:
        lo_s, rest = spec.split("..", 1)
        if "x" in rest:
            hi_s, step_s = rest.split("x", 1)
            step = int(step_s)
        else:
            hi_s, step = rest, 2
        lo, hi = _parse_int_token(lo_s), _parse_int_token(hi_s)
        if lo < 2 or hi < lo or step < 2:
            raise UsageError(f"bad n-grid {spec!r}")
        out = []
        n = lo
        while n <= hi:
            out.append(n)
            n *= step
        return out
    return [_parse_int_token(t) for t in spec.split(",") if t.strip()]


def _cmd_solve(args) -> int:
    try:
        text = Path(args.instance).read_text(encoding="utf-8")
        spec = parse_instance(text)
        oracle = instantiate(spec)
    except (OSError, LoadError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    try:
        if isinstance(oracle, FnOracle):
            if args.algo == "new":
                res = solve_tarski(oracle, base2d=args.base2d)
                point = res.point
            elif args.algo == "dqy":
                point = solve_tarski_dqy(oracle).point
            else:
                point = brute_force_fixed_point(oracle, oracle.box)
            verified = point is not None and oracle.peek(point) == point
            what = f"fixed point: {point}"
        else:
            sol = solve_star(oracle, base2d=args.base2d)
            fresh = oracle.peek(sol.point)
            verified = fresh == sol.signs and (
                all(s >= 0 for s in fresh) or all(s <= 0 for s in fresh))
            what = (f"sign witness: point {sol.point} signs {sol.signs} "
                    f"polarity {sol.polarity}")
    except (InstanceInvalidError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    st = oracle.stats
    print(what)
    print(f"queries: distinct {st.distinct}, total {st.total}, debug {st.debug}")
    print(f"verified: {'yes' if verified else 'NO'}")
    return 0 if verified else 1


def _cmd_bench(args) -> int:
    try:
        grid = parse_n_grid(args.n_grid)
        algos = [a.strip() for a in args.algos.split(",") if a.strip()]
        for a in algos:
            if a not in ALGORITHMS:
                raise UsageError(f"unknown algorithm {a!r}")
        records = run_sweep(args.family, args.k, grid, args.reps, args.seed,
                            algos, args.base2d)
    except (UsageError, InstanceInvalidError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    write_csv(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    if records:
        print(format_summary(records))
    invalid = [r for r in records if not r.valid]
    if invalid:
        print(f"error: {len(invalid)} records failed verification", file=sys.stderr)
        return 1
    return 0


def _cmd_verify(args) -> int:
    suite = CLI_SUITES[args.suite]
    report = suite(args.seed, args.cap)
    for line in report.lines():
        print(line)
    return 0 if report.ok else 1


def _cmd_enumerate(args) -> int:
    try:
        sides = tuple(int(t) for t in args.sides.split(",") if t.strip())
        box = Box.from_sides(sides)
    except (ValueError, UsageError) as e:
        print(f"error: bad sides: {e}", file=sys.stderr)
        return 1
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    index = []
    try:
        for i, f in enumerate(enumerate_monotone_maps(box, cap=args.cap)):
            name = f"map_{i:06d}.json"
            doc = spec_to_dict(f.spec)
            (out_dir / name).write_text(json.dumps(doc) + "\n", encoding="utf-8")
            index.append(name)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    (out_dir / "index.json").write_text(
        json.dumps({"sides": list(sides), "count": len(index), "files": index})
        + "\n", encoding="utf-8")
    print(f"wrote {len(index)} instances to {out_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tarskigrid",
        description="Fixed points of monotone grid maps: solvers, benchmarks, "
                    "verification suites.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one instance document")
    sp.add_argument("--instance", required=True, help="path to a JSON instance")
    sp.add_argument("--algo", choices=ALGORITHMS, default="new")
    sp.add_argument("--base2d", choices=BASE2D_CHOICES, default="fps")
    sp.set_defaults(fn=_cmd_solve)

    bp = sub.add_parser("bench", help="run a benchmark sweep, emit CSV")
    bp.add_argument("--family", choices=FAMILIES, required=True)
    bp.add_argument("--k", type=int, required=True)
    bp.add_argument("--n-grid", required=True,
                    help="LO..HI, LO..HIxSTEP, or comma list; tokens may be 2^K")
    bp.add_argument("--reps", type=int, default=10)
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--algos", default="new")
    bp.add_argument("--base2d", choices=BASE2D_CHOICES, default="fps")
    bp.add_argument("--out", required=True)
    bp.set_defaults(fn=_cmd_bench)

    vp = sub.add_parser("verify", help="run a verification suite")
    vp.add_argument("--suite", choices=sorted(CLI_SUITES), required=True)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--cap", type=int, default=None,
                    help="instance-count cap where the suite supports one")
    vp.set_defaults(fn=_cmd_verify)

    ep = sub.add_parser("enumerate", help="write every monotone map as an instance")
    ep.add_argument("--sides", required=True, help="comma list, e.g. 2,2")
    ep.add_argument("--out", required=True)
    ep.add_argument("--cap", type=int, default=10 ** 5)
    ep.set_defaults(fn=_cmd_enumerate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
