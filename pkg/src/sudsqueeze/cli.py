"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 invalid input, 3 self-test failure.
"""

import argparse
import json
import sys
import warnings

import numpy as np

from . import bench
from .exceptions import SqueezingError
from .models import MODEL_NAMES
from .polytope import vertices

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_SELFTEST = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_evaluate(args):
    _emit(bench.evaluate(args.path, args.tol if args.tol is not None else bench.crit.DETECTION_TOL), args.out)


def _cmd_scan(args):
    spec = {"model": args.model, "N": args.N, "d": args.d, "gamma": args.gamma, "seed": args.seed}
    cfg = bench.ScanConfig(
        spec,
        args.criterion,
        t_min=args.tmin,
        t_max=args.tmax,
        grid=args.grid,
        tol=args.tol if args.tol is not None else 1e-3,
        seed=args.seed,
    )
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t = bench.limit_temperature(cfg)
    report = {
        "model": spec,
        "criterion": args.criterion,
        "limit_temperature": t,
        "warnings": [str(w.message) for w in caught],
    }
    _emit(json.dumps(report, sort_keys=True, indent=2), args.out)


def _cmd_table(args):
    _emit(bench.table(args.id), args.out)


def _cmd_fig3(args):
    _emit(bench.fig3_data(args.N), args.out)


def _cmd_polytope(args):
    k = args.d * args.d - 1
    gexp = np.zeros(k) if args.gexp is None else np.array([float(v) for v in args.gexp.split(",")])
    spec = vertices(gexp, args.N, args.d)
    _emit(json.dumps(spec.to_dict(), sort_keys=True, indent=2), args.out)


def _cmd_selftest(args):
    results = bench.selftest(args.seed, args.inject_fault)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {msg}" for name, ok, msg in results]
    _emit("\n".join(lines), args.out)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_SELFTEST


def build_parser():
    p = _Parser(prog="sudsqueeze", description="su(d)-squeezing entanglement criteria")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write output to this file instead of stdout")

    ev = sub.add_parser("evaluate", help="evaluate every criterion on a JSON state file")
    ev.add_argument("path")
    ev.add_argument("--tol", type=float, help="detection tolerance (default 1e-9)")
    common(ev)
    ev.set_defaults(func=_cmd_evaluate)

    sc = sub.add_parser("scan", help="limit temperature of one criterion for one model")
    sc.add_argument("--model", choices=MODEL_NAMES, required=True)
    sc.add_argument("--N", type=int, required=True)
    sc.add_argument("--d", type=int, default=3)
    sc.add_argument("--gamma", type=float, default=1.0)
    sc.add_argument("--criterion", choices=bench.CRITERIA, default="sud")
    sc.add_argument("--tmin", type=float, default=1e-3)
    sc.add_argument("--tmax", type=float, default=20.0)
    sc.add_argument("--grid", type=int, default=200)
    sc.add_argument("--tol", type=float, help="bisection tolerance in T (default 1e-3)")
    sc.add_argument("--seed", type=int, default=0)
    common(sc)
    sc.set_defaults(func=_cmd_scan)

    tb = sub.add_parser("table", help="reproduce a limit-temperature table as CSV")
    tb.add_argument("id", type=int, choices=(1, 2, 3))
    common(tb)
    tb.set_defaults(func=_cmd_table)

    fg = sub.add_parser("fig3", help="diagonal of U for three thermal states, as CSV")
    fg.add_argument("--N", type=int, default=4)
    common(fg)
    fg.set_defaults(func=_cmd_fig3)

    po = sub.add_parser("polytope", help="vertices of the polytope at fixed polarization")
    po.add_argument("--N", type=int, required=True)
    po.add_argument("--d", type=int, default=3)
    po.add_argument("--gexp", help="comma-separated collective expectation values (default all zero)")
    common(po)
    po.set_defaults(func=_cmd_polytope)

    st = sub.add_parser("selftest", help="run the invariant self-test")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--inject-fault", choices=bench.FAULTS)
    common(st)
    st.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (SqueezingError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
