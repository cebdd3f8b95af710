"""Command line interface.

    cyclohw hw --p2 7 --p3 23 --method both
    cyclohw blocks --m 21 --p 23 --format csv
    cyclohw verify --p2 5 7 11 13 --p3-bound 2000 --output ledger.json
    cyclohw table --p2 7 --r3 2 --count 5
    cyclohw bench --p2 7 --p3 1933 --reps 5

Exit status: 0 success/agree, 2 disagreement, 3 inapplicable or invalid
domain input, 4 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
import time
from typing import Any

from . import closedform as cf
from .blocks import partition
from .closedform import R3_CASES, R3_PLUS, TernaryParams, ValidationReport
from .cyclotomic import DEFAULT_DEGREE_CAP, hw_oracle
from .errors import (CyclohwError, FormulaNotApplicable, InvalidParameters, OracleInfeasible,
                     PartitionMismatch)
from .harness import DESK_CONFIG, SweepConfig, class_residue, load_config, primes_in_class, run_sweep, summarize

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_DOMAIN = 3
EXIT_USAGE = 4

JSON_SAFE_INT = 2**53


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def json_safe(obj: Any) -> Any:
    """Replace integers beyond 2^53 with decimal strings, recursively."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) > JSON_SAFE_INT else obj
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(json_safe(obj), indent=2) + "\n"


def dump_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def dump_human(header: list[str], rows: list[list[Any]]) -> str:
    cells = [header] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def ledger_json(cfg: SweepConfig, entries: list[ValidationReport]) -> str:
    return dump_json({"config": cfg.to_dict(), "entries": [e.to_dict() for e in entries]})


def _cell(v: Any) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(json_safe(v), separators=(",", ":"))
    return "" if v is None else str(v)


def ledger_csv(entries: list[ValidationReport]) -> str:
    header = ["formula", "params", "formula_value", "oracle_value", "verdict", "note"]
    rows = [[e.formula, _cell(e.params), _cell(e.formula_value), _cell(e.oracle_value),
             e.verdict, e.note] for e in entries]
    return dump_csv(header, rows)


def _emit(args, header, rows, obj) -> None:
    if args.format == "json":
        sys.stdout.write(dump_json(obj))
    elif args.format == "csv":
        sys.stdout.write(dump_csv(header, rows))
    else:
        sys.stdout.write(dump_human(header, rows))


def cmd_hw(args) -> int:
    params = TernaryParams(args.p2, args.p3)
    formula = oracle = None
    if args.method in ("formula", "both"):
        try:
            formula = cf.hw_ternary(params)
        except FormulaNotApplicable:
            raise FormulaNotApplicable(
                f"formula not applicable; use --method oracle (r3 = {params.r3}, "
                f"need 2 or {params.m - 2})") from None
    if args.method in ("oracle", "both"):
        oracle = hw_oracle(3, args.p2, args.p3, cap=args.oracle_cap)
    verdict = None
    if args.method == "both":
        verdict = "agree" if formula == oracle else "disagree"
    obj = {"p2": args.p2, "p3": args.p3, "method": args.method,
           "formula": formula, "oracle": oracle, "verdict": verdict}
    if args.format == "human":
        print(f"n = 3*{args.p2}*{args.p3} = {params.n()}")
        if formula is not None:
            print(f"formula: {formula}")
        if oracle is not None:
            print(f"oracle:  {oracle}")
        if verdict:
            print(f"verdict: {verdict}")
    else:
        header = ["p2", "p3", "method", "formula", "oracle", "verdict"]
        row = [args.p2, args.p3, args.method, _cell(formula), _cell(oracle), _cell(verdict)]
        _emit(args, header, [row], obj)
    return EXIT_DISAGREE if verdict == "disagree" else EXIT_OK


def cmd_blocks(args) -> int:
    table = partition(args.m, args.p, cap=args.oracle_cap)
    header = ["i", "hw_full", "hw_trunc"]
    if args.coeffs:
        header += ["coeffs_full", "coeffs_trunc"]
    rows, objs = [], []
    for i, (full, trunc) in enumerate(table.rows):
        row: list[Any] = [i, table.hw_full[i], table.hw_trunc[i]]
        obj: dict[str, Any] = {"i": i, "hw_full": table.hw_full[i], "hw_trunc": table.hw_trunc[i]}
        if args.coeffs:
            vec_f = list(full.coeffs) + [0] * (args.m - len(full))
            vec_t = list(trunc.coeffs) + [0] * (table.r - len(trunc))
            row += [" ".join(map(str, vec_f)), " ".join(map(str, vec_t))]
            obj.update(coeffs_full=vec_f, coeffs_trunc=vec_t)
        rows.append(row)
        objs.append(obj)
    _emit(args, header, rows, {"m": args.m, "p": args.p, "r": table.r, "q": table.q,
                               "rows": objs})
    return EXIT_OK


def _verify_config(args) -> SweepConfig:
    if args.config:
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError, TypeError) as exc:
            raise UsageError(f"cannot load config {args.config}: {exc}") from exc
    else:
        base = DESK_CONFIG
        cfg = SweepConfig(
            p2_set=args.p2 if args.p2 else base.p2_set,
            p3_bound=args.p3_bound if args.p3_bound else base.p3_bound,
            r3_cases=tuple(args.r3) if args.r3 else base.r3_cases,
            oracle_degree_cap=args.oracle_cap,
            worker_count=args.workers,
            extra_pairs=[tuple(pair) for pair in (args.pair or [])],
        )
    return cfg


def cmd_verify(args) -> int:
    cfg = _verify_config(args)
    entries = run_sweep(cfg)
    text = ledger_csv(entries) if args.ledger_format == "csv" else ledger_json(cfg, entries)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    s = summarize(entries)
    print(f"entries: {s['total']}  agree: {s['agree']}  disagree: {s['disagree']}"
          f"  unchecked: {s['unchecked']}  gating disagreements: {s['gating_disagree']}")
    for e in entries:
        if e.verdict == "disagree" and e.gating:
            print(f"DISAGREE {e.formula} {e.params}: formula {e.formula_value!r},"
                  f" oracle {e.oracle_value!r} {e.note}")
    print(f"ledger written to {args.output}")
    return EXIT_DISAGREE if s["gating_disagree"] else EXIT_OK


def cmd_table(args) -> int:
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    cf.validate_p2(args.p2)
    m = 3 * args.p2
    residue = class_residue(args.p2, args.r3)
    slope = cf.slope_N(args.p2)
    const = cf.constant_term(args.p2)
    found: list[int] = []
    bound = 64 * m
    while len(found) < args.count:
        found = primes_in_class(m, residue, bound, above=m)[:args.count]
        bound *= 2
    header = ["p3", "hw", "N_num", "N_den", "C"]
    rows = [[p3, cf.hw_ternary(TernaryParams(args.p2, p3)), slope.numerator,
             slope.denominator, const.numerator] for p3 in found]
    _emit(args, header, rows, {"p2": args.p2, "r3": args.r3,
                               "rows": [dict(zip(header, r)) for r in rows]})
    return EXIT_OK


def _bench_formula(p2: int, p3: int):
    """Closed form for the pair: r3 = +-2 by the ternary formula, r3 = +-1 by
    the general formula (which the sweep also checks)."""
    params = TernaryParams(p2, p3)
    if params.r3_case is not None:
        return lambda: cf.hw_ternary(TernaryParams(p2, p3))
    if params.r3 in (1, params.m - 1):
        return lambda: cf.exact_value(cf.general_value(3, p2, p3))
    raise FormulaNotApplicable(f"no closed form for r3 = {params.r3}")


def cmd_bench(args) -> int:
    if args.reps <= 0:
        raise UsageError("--reps must be positive")
    formula_fn = _bench_formula(args.p2, args.p3)
    formula = formula_fn()
    oracle = hw_oracle(3, args.p2, args.p3, cap=args.oracle_cap)
    if formula != oracle:
        print(f"formula {formula} != oracle {oracle}", file=sys.stderr)
        return EXIT_DISAGREE

    def timed(fn) -> float:
        samples = []
        for _ in range(args.reps):
            t0 = time.perf_counter()
            fn()
            samples.append(time.perf_counter() - t0)
        return statistics.median(samples)

    t_formula = timed(formula_fn)
    t_oracle = timed(lambda: hw_oracle(3, args.p2, args.p3, cap=args.oracle_cap))
    header = ["method", "hw", "median_seconds", "reps"]
    rows = [["formula", formula, f"{t_formula:.6e}", args.reps],
            ["oracle", oracle, f"{t_oracle:.6e}", args.reps]]
    _emit(args, header, rows, {"p2": args.p2, "p3": args.p3, "hw": formula, "reps": args.reps,
                               "formula_seconds": t_formula, "oracle_seconds": t_oracle})
    return EXIT_OK


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P2,P3, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cyclohw", description="Hamming weights of ternary cyclotomic "
                     "polynomials Phi_{3 p2 p3}, checked against brute-force expansion.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        if formats:
            p.add_argument("--format", choices=("human", "csv", "json"), default="human")
        p.add_argument("--oracle-cap", type=int, default=DEFAULT_DEGREE_CAP,
                       help="largest degree the oracle will expand (default %(default)s)")

    p = sub.add_parser("hw", help="hw(Phi_{3 p2 p3}) by formula and/or oracle")
    p.add_argument("--p2", type=int, required=True)
    p.add_argument("--p3", type=int, required=True)
    p.add_argument("--method", choices=("formula", "oracle", "both"), default="formula")
    common(p)
    p.set_defaults(func=cmd_hw)

    p = sub.add_parser("blocks", help="block table of Phi_{mp}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--coeffs", action="store_true", help="include coefficient vectors")
    common(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("verify", help="run an oracle sweep and write the ledger")
    p.add_argument("--config", help="JSON sweep config; overrides the inline options")
    p.add_argument("--p2", type=int, nargs="+")
    p.add_argument("--p3-bound", type=int)
    p.add_argument("--r3", choices=R3_CASES, nargs="+")
    p.add_argument("--pair", type=_pair, action="append", metavar="P2,P3",
                   help="extra (p2, p3) pair; may repeat")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", default="ledger.json")
    p.add_argument("--ledger-format", choices=("json", "csv"), default="json")
    common(p, formats=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="formula hw for the first K primes of a residue class")
    p.add_argument("--p2", type=int, required=True)
    p.add_argument("--r3", choices=R3_CASES, default=R3_PLUS)
    p.add_argument("--count", type=int, default=10)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("bench", help="time the closed form against full expansion")
    p.add_argument("--p2", type=int, required=True)
    p.add_argument("--p3", type=int, required=True)
    p.add_argument("--reps", type=int, default=5)
    common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormulaNotApplicable, InvalidParameters, OracleInfeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PartitionMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except CyclohwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
