"""Command-line entry point: ``rmas {gen,solve,lp,eval,bench,verify}``.

Exit status is 0 on success, 1 on domain errors (bad input file, infeasible
labeling, oracle cap, failed check) and 2 on usage errors.  Data goes to
stdout or ``--out``; diagnostics go to stderr, as JSON when ``--json`` is set.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from rmas import bench, exact
from rmas.combined import ALGORITHMS, solve
from rmas.errors import RmasError
from rmas.generators import FIXTURES, KINDS, GenSpec, fixture, generate, random_suite
from rmas.instance import evaluate, filter_edges, parse_instance, serialize_instance
from rmas.lp import build_lp, solve_lp

log = logging.getLogger("rmas")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _num(x: Optional[float]) -> str:
    if x is None:
        return "-"
    if float(x).is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(float(x))


def _read_instance(path: Optional[str]):
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text(encoding="utf-8")
    return parse_instance(text)


def _emit(text: str, out: Optional[str]):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_gen(args) -> int:
    spec = GenSpec(args.kind, args.n, args.m, args.label_lo, args.label_hi, args.max_list,
                   args.weight_lo, args.weight_hi, args.p, args.seed, args.name)
    _emit(serialize_instance(generate(spec)), args.out)
    return 0


def cmd_solve(args) -> int:
    inst = _read_instance(args.inp)
    report = solve(inst, args.alg, seed=args.seed, cap=args.cap)
    if args.with_opt and report.opt is None:
        report.opt = exact.brute_force_opt(inst, args.cap).value
    if args.json:
        _emit(_dump(report.to_json(timings=args.timings)), args.out)
        return 0
    lines = [
        f"algorithm {report.algorithm}",
        f"value {_num(report.value)}",
        "labeling " + " ".join(map(str, report.labeling)),
        f"W {_num(report.W)}",
        f"lp {_num(report.lp)}",
        f"guarantee {_num(report.guarantee)}",
    ]
    if report.opt is not None:
        lines.append(f"opt {_num(report.opt)}")
    if args.timings:
        lines += [f"time_ms {k} {v:.3f}" for k, v in report.timings_ms.items()]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_lp(args) -> int:
    inst = filter_edges(_read_instance(args.inp)).kept
    prog = build_lp(inst)
    sol = solve_lp(prog)
    if not (args.json or args.dump_solution):
        _emit(f"{_num(sol.lp)}\n", args.out)
        return 0
    doc = {"lp": sol.lp}
    if args.dump_solution:
        names = prog.variable_names()
        doc["variables"] = {names[i]: float(v) for i, v in enumerate(sol.values) if v > 1e-12}
    _emit(_dump(doc), args.out)
    return 0


def cmd_eval(args) -> int:
    inst = _read_instance(args.inp)
    if args.labels_file:
        raw = Path(args.labels_file).read_text(encoding="utf-8").strip()
    elif args.labels is not None:
        raw = args.labels
    else:
        raise UsageError("eval: one of --labels or --labels-file is required")
    try:
        labeling = [int(tok) for tok in raw.split()]
    except ValueError:
        raise UsageError(f"eval: labels must be integers, got {raw!r}") from None
    value = evaluate(inst, labeling)
    if args.json:
        _emit(_dump({"value": value, "labeling": labeling}), args.out)
    else:
        _emit(f"{_num(value)}\n", args.out)
    return 0


def cmd_bench(args) -> int:
    if args.experiment == "ratio":
        if args.family == "fixtures":
            family = [(i, FIXTURES[name]) for i, name in enumerate(sorted(FIXTURES))]
        else:
            family = random_suite(args.count, args.seed)
        rows, skipped = bench.ratio_experiment(family, cap=args.cap)
        _emit(bench.to_csv(bench.RATIO_HEADER, rows), args.out)
        if skipped:
            lines = "".join(f"{i}\t{why}\n" for i, why in skipped)
            if args.out in (None, "-"):
                sys.stderr.write(lines)
            else:
                Path(args.out + ".skipped").write_text(lines, encoding="utf-8")
        print(bench.ratio_summary(rows), file=sys.stderr)
        return 0
    if args.experiment == "dicut":
        rows = bench.dicut_experiment(args.count, args.seed, (args.n_min, args.n_max), args.p)
        _emit(bench.to_csv(bench.DICUT_HEADER, rows), args.out)
        return 0
    # mc
    inst = fixture(args.fixture) if args.fixture else _read_instance(args.inp)
    res = bench.monte_carlo_experiment(inst, args.count, args.seed, args.arm)
    doc = {"arm": args.arm, "exact": res.exact, "mean": res.mean, "stderr": res.stderr,
           "trials": res.trials, "consistent": res.consistent}
    if args.json:
        _emit(_dump(doc), args.out)
    else:
        _emit(" ".join(f"{k}={v}" for k, v in doc.items()) + "\n", args.out)
    return 0 if res.consistent else 1


def cmd_verify(args) -> int:
    inst = _read_instance(args.inp)
    checks = bench.verify_instance(inst, cap=args.cap)
    if args.json:
        doc = [{"check": c.name, "status": c.status, "detail": c.detail} for c in checks]
        _emit(_dump(doc), args.out)
    else:
        _emit("".join(f"{c.status} {c.name}: {c.detail}\n" for c in checks), args.out)
    return 1 if any(c.passed is False for c in checks) else 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--in", dest="inp", metavar="PATH", help="input .rmas file (default: stdin)")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")
    common.add_argument("--cap", type=int, default=exact.DEFAULT_CAP,
                        help="maximum labelings the exact oracle may enumerate")

    parser = _Parser(prog="rmas", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", parents=[common], help="write a generated instance")
    p.add_argument("--kind", choices=KINDS, default="random")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--m", type=int, default=6)
    p.add_argument("--p", type=float, default=0.5, help="edge probability for --kind dag")
    p.add_argument("--max-list", type=int, default=4, help="list size bound (per-node k for khandekar)")
    p.add_argument("--label-lo", type=int, default=0)
    p.add_argument("--label-hi", type=int, default=9)
    p.add_argument("--weight-lo", type=int, default=1)
    p.add_argument("--weight-hi", type=int, default=10)
    p.add_argument("--name", choices=sorted(FIXTURES), help="fixture name for --kind fixture")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", parents=[common], help="run one algorithm")
    p.add_argument("--alg", choices=ALGORITHMS, default="combined")
    p.add_argument("--with-opt", action="store_true", help="also report the brute-force optimum")
    p.add_argument("--timings", action="store_true", help="include per-phase timings")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("lp", parents=[common], help="solve the LP relaxation")
    p.add_argument("--dump-solution", action="store_true")
    p.set_defaults(func=cmd_lp)

    p = sub.add_parser("eval", parents=[common], help="value of a given labeling")
    p.add_argument("--labels", help='space-separated labels in node order, e.g. "1 2"')
    p.add_argument("--labels-file", metavar="PATH")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", parents=[common], help="run an experiment")
    p.add_argument("experiment", choices=("ratio", "dicut", "mc"))
    p.add_argument("--count", type=int, default=None,
                   help="instances (ratio, dicut) or trials (mc)")
    p.add_argument("--family", choices=("random", "fixtures"), default="random")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--arm", choices=("simple", "round"), default="simple")
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", parents=[common], help="check the bound chain on one instance")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.command == "bench" and args.count is None:
            args.count = 100_000 if args.experiment == "mc" else 100
        if args.command == "bench" and args.count < (1 if args.experiment == "mc" else 0):
            raise UsageError("bench: --count out of range")
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        _report("usage-error", str(exc), as_json)
        return 2
    except RmasError as exc:
        _report(exc.kind, str(exc), as_json)
        return 1
    except OSError as exc:
        _report("io-error", str(exc), as_json)
        return 1


def _report(kind: str, detail: str, as_json: bool):
    if as_json:
        sys.stderr.write(json.dumps({"error": kind, "detail": detail}) + "\n")
    else:
        sys.stderr.write(f"rmas: {kind}: {detail}\n")


if __name__ == "__main__":
    sys.exit(main())
