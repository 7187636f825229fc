"""Command-line entry point: ``hinge-sandpile`` / ``python -m hinge_sandpile``.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 verification
mismatch, 4 oracle budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

from .critical_group import DegreeError, DisconnectedGraphError, critical_group
from .divisor_algebra import (
    divisor_order,
    divisor_order_gcd,
    loads_divisor,
    make_delta,
    make_epsilon,
    make_eta,
)
from .graph_core import (
    GraphFormatError,
    HingeSpec,
    build_hinge,
    build_thick_cycle,
    dumps_graph,
    dumps_layout,
    hinge_dual,
    loads_graph,
    loads_layout,
)
from .oracles import BudgetExceeded, OracleBudget, divisor_order_bruteforce
from .verify import SCHEMA, TARGETS, GridError, parse_specs, run_claim45, run_verify

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_MISMATCH, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


_INLINE = re.compile(r"^(hinge|thick-cycle|dual)[:(]([\d,\s]+)\)?$")


def load_graph_source(source: str, layout_path: str | None = None):
    """Graph plus optional layout from a file path or an inline ``hinge:3,4,5`` literal."""
    m = _INLINE.match(source.strip())
    if m:
        kind, nums = m.group(1), _int_list(m.group(2))
        try:
            if kind == "hinge":
                return build_hinge(HingeSpec(tuple(nums)))
            if kind == "dual":
                return hinge_dual(HingeSpec(tuple(nums))), None
            return build_thick_cycle(nums), None
        except ValueError as exc:
            raise DataError(str(exc)) from None
    try:
        g = loads_graph(Path(source).read_text())
        layout = None
        if layout_path:
            layout = loads_layout(Path(layout_path).read_text(), g)
        return g, layout
    except OSError as exc:
        raise DataError(f"cannot read {exc.filename}: {exc.strerror}") from None
    except GraphFormatError as exc:
        raise DataError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- commands ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    nums = _int_list(args.values)
    try:
        if args.family == "hinge":
            spec = HingeSpec(tuple(nums))
            if args.dual:
                g, layout = hinge_dual(spec), None
            else:
                g, layout = build_hinge(spec)
        else:
            if args.dual:
                raise UsageError("--dual only applies to hinge specs")
            g, layout = build_thick_cycle(nums), None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.layout:
        if layout is None:
            raise UsageError("--layout is only available for hinge graphs")
        Path(args.layout).write_text(dumps_layout(layout))
    _emit(dumps_graph(g), args.out)
    return EXIT_OK


def cmd_group(args) -> int:
    g, _ = load_graph_source(args.graph, args.layout)
    try:
        structure = critical_group(g)
    except DisconnectedGraphError as exc:
        raise DataError(str(exc)) from None
    if args.json:
        _emit(_json({"schema": SCHEMA, "graph": args.graph, **structure.to_dict()}), args.out)
    else:
        factors = " ".join(map(str, structure.invariant_factors)) or "(trivial)"
        _emit(f"invariant factors: {factors}\norder: {structure.order}\n", args.out)
    return EXIT_OK


def _named_divisor(name: str, layout):
    if layout is None:
        raise UsageError("named divisors need a hinge layout (inline hinge:... or --layout FILE)")
    name = name.strip()
    try:
        if name == "delta":
            return make_delta(layout)
        if name.startswith("epsilon:"):
            return make_epsilon(layout, int(name.split(":", 1)[1]))
        if name.startswith("eta:"):
            i, j = _int_list(name.split(":", 1)[1])
            return make_eta(layout, i, j)
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad divisor {name!r}: {exc}") from None
    raise UsageError(f"unknown divisor {name!r}; use delta, epsilon:<i> or eta:<i>,<j>")


def cmd_order(args) -> int:
    g, layout = load_graph_source(args.graph, args.layout)
    if args.divisor_file:
        try:
            d = loads_divisor(Path(args.divisor_file).read_text(), g)
        except OSError as exc:
            raise DataError(f"cannot read {exc.filename}: {exc.strerror}") from None
        except GraphFormatError as exc:
            raise DataError(str(exc)) from None
    elif args.divisor:
        d = _named_divisor(args.divisor, layout)
    else:
        raise UsageError("give --divisor NAME or --divisor-file FILE")
    try:
        if args.method == "coords":
            order = divisor_order(g, d)
        elif args.method == "gcd":
            order = divisor_order_gcd(g, d)
        else:
            budget = OracleBudget(max_group_order=args.max_group_order, max_multiple=args.max_multiple)
            order = divisor_order_bruteforce(g, d, 0, budget)
    except (DegreeError, DisconnectedGraphError) as exc:
        raise DataError(str(exc)) from None
    if args.json:
        _emit(_json({"schema": SCHEMA, "graph": args.graph, "divisor": list(d), "method": args.method, "order": order}), args.out)
    else:
        _emit(f"{order}\n", args.out)
    return EXIT_OK


def _cases_csv(cases: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["params", "predicted", "computed", "match", "status"])
    for c in cases:
        writer.writerow(
            [json.dumps(c["params"], sort_keys=True), json.dumps(c["predicted"], sort_keys=True),
             json.dumps(c["computed"], sort_keys=True), c["match"], c["status"]]
        )
    return buf.getvalue()


def cmd_verify(args) -> int:
    budget = OracleBudget(
        max_edges=args.max_edges, max_group_order=args.max_group_order, max_multiple=args.max_multiple
    )
    try:
        report = run_verify(
            args.target, k=args.k, n=args.n, specs=args.specs, max_cycles=args.max_cycles,
            min_k=args.min_k, max_k=args.max_k, samples=args.samples, seed=args.seed,
            max_value=args.max_value, budget=budget, jobs=args.jobs, timing=args.timing,
        )
    except GridError as exc:
        raise UsageError(str(exc)) from None
    s = report.summary
    if args.json:
        _emit(_json(report.to_dict()), args.out)
    elif args.csv:
        _emit(_cases_csv(report.cases), args.out)
    else:
        lines = [
            f"{c['status'].upper():7} {json.dumps(c['params'], sort_keys=True)} "
            f"predicted={json.dumps(c['predicted'], sort_keys=True)} computed={json.dumps(c['computed'], sort_keys=True)}"
            for c in report.cases
        ]
        lines.append(f"{report.target}: {s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped, {s['budget']} budget")
        _emit("\n".join(lines) + "\n", args.out)
    if args.timing and report.runtime is not None:
        print(f"runtime: {report.runtime:.2f}s", file=sys.stderr)
    if s["fail"]:
        return EXIT_MISMATCH
    if s["budget"]:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_claim45(args) -> int:
    specs_arg = "exhaustive" if args.specs == "all" else args.specs
    try:
        specs = parse_specs(
            specs_arg, seed=args.seed, max_cycles=args.max_n, min_k=args.min_k, max_k=args.max_k, min_cycles=2
        )
    except GridError as exc:
        raise UsageError(str(exc)) from None
    try:
        report = run_claim45(specs, args.convention, args.jobs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["cycle_sizes", "quotient", "bullet1", "bullet2", "bullet3", "product",
                         "predicted_structure", "snf_structure", "consistent"])
        for r in report["records"]:
            writer.writerow([
                " ".join(map(str, r["cycle_sizes"])), r["quotient"],
                *(r["predicted_components"][b]["value"] for b in ("bullet1", "bullet2", "bullet3")),
                r["product"],
                " ".join(map(str, r["predicted_structure"]["invariant_factors"])),
                " ".join(map(str, r["snf_structure"]["invariant_factors"])), r["consistent"],
            ])
        _emit(buf.getvalue(), args.out)
    elif args.json or args.out:
        _emit(_json(report), args.out)
    else:
        for r in report["records"]:
            flag = "consistent" if r["consistent"] else "INCONSISTENT"
            print(f"{r['cycle_sizes']}: a/b={r['quotient']} product={r['product']} "
                  f"snf={r['snf_structure']['invariant_factors']} {flag}")
        s = report["summary"]
        print(f"factorisation check: {s['consistent']}/{s['total']} consistent, {s['inconsistent']} candidates")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hinge-sandpile", description="Critical groups and hinge-graph formula checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a graph file")
    g.add_argument("family", choices=["hinge", "thick-cycle"])
    g.add_argument("values", help="cycle sizes or multiplicities, e.g. 5,5,5")
    g.add_argument("--dual", action="store_true", help="emit the thick-cycle dual of the hinge")
    g.add_argument("--layout", metavar="PATH", help="also write the hinge layout sidecar")
    g.add_argument("--out", metavar="PATH")
    g.set_defaults(func=cmd_gen)

    gr = sub.add_parser("group", help="invariant factors and order of the critical group")
    gr.add_argument("graph", help="graph file, or hinge:5,5,5 / thick-cycle:2,3,4,1 / dual:3,4,5")
    gr.add_argument("--layout", metavar="PATH")
    gr.add_argument("--json", action="store_true")
    gr.add_argument("--out", metavar="PATH")
    gr.set_defaults(func=cmd_group)

    o = sub.add_parser("order", help="order of a degree-0 divisor")
    o.add_argument("graph")
    o.add_argument("--divisor", help="delta, epsilon:<i> or eta:<i>,<j> (1-based cycles)")
    o.add_argument("--divisor-file", metavar="PATH")
    o.add_argument("--layout", metavar="PATH")
    o.add_argument("--method", choices=["coords", "gcd", "brute"], default="coords")
    o.add_argument("--max-group-order", type=int, default=10_000)
    o.add_argument("--max-multiple", type=int, default=100_000)
    o.add_argument("--json", action="store_true")
    o.add_argument("--out", metavar="PATH")
    o.set_defaults(func=cmd_order)

    v = sub.add_parser("verify", help="sweep a grid and compare predictions with computation")
    v.add_argument("target", choices=sorted(TARGETS))
    v.add_argument("--k", help="cycle sizes for same-shape targets, e.g. 3..7")
    v.add_argument("--n", help="cycle counts for same-shape targets, e.g. 1..5")
    v.add_argument("--specs", default="exhaustive", help="exhaustive, random:<count> or 3,4,5/5,5,5")
    v.add_argument("--max-cycles", type=int)
    v.add_argument("--min-k", type=int, default=3)
    v.add_argument("--max-k", type=int)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--max-value", type=int, default=10**6)
    v.add_argument("--max-edges", type=int, default=16)
    v.add_argument("--max-group-order", type=int, default=2000)
    v.add_argument("--max-multiple", type=int, default=10_000)
    _common_sweep(v)
    v.add_argument("--timing", action="store_true", help="record runtime (makes reports run-dependent)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("claim45", help="check the conjectured factorisation over a spec grid")
    c.add_argument("--specs", default="all", help="all, random:<count> or 3,4,5/5,5,5")
    c.add_argument("--max-n", type=int, default=4)
    c.add_argument("--min-k", type=int, default=3)
    c.add_argument("--max-k", type=int, default=7)
    c.add_argument("--convention", choices=["vertices", "minus-one"], default="vertices",
                   help="read spec values as vertex counts k_i or path lengths k_i - 1")
    _common_sweep(c)
    c.set_defaults(func=cmd_claim45)
    return p


def _common_sweep(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--out", metavar="PATH")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already printed by argparse
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hinge-sandpile: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"hinge-sandpile: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BudgetExceeded as exc:
        print(f"hinge-sandpile: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
