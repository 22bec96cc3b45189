"""Command-line front end: generation, derivation, representation comparison.

Every command emits deterministic JSON (or CSV histograms), so identical
inputs, seeds and limits reproduce byte-identical output.  ``-`` reads a
file argument from stdin.  Exit codes: 0 success, 1 validation failure,
2 usage error, 3 budget or limit exhaustion (partial output, if any, is
flagged complete=false).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import derived, fieldrep, generators, oracle
from .core import Matroid, MatroidError, set_of
from .families import Antichain, Family, UniverseTooLarge, count_upward_closure
from .fields import FieldError, parse_field_argument
from .generators import Graph, ParseError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _read_json_arg(path: str):
    if path == "-":
        try:
            return json.load(sys.stdin)
        except json.JSONDecodeError as exc:
            raise ParseError(f"stdin: invalid JSON at line {exc.lineno}: {exc.msg}")
    return generators._read_json(path)


def _load_matroid_arg(path: str, validate_exchange: bool = False) -> Matroid:
    return Matroid.from_dict(_read_json_arg(path), validate_exchange=validate_exchange)


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1) + "\n"
    if out and out != "-":
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_limits(spec: str | None) -> derived.DeriveLimits:
    kwargs = {}
    if spec:
        for part in spec.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if not value:
                raise ValueError(f"limit '{part}' is not KEY=VALUE")
            if key in ("iter", "iterations", "max_iterations"):
                kwargs["max_iterations"] = int(value)
            elif key in ("size", "max_set_size"):
                kwargs["max_set_size"] = int(value)
            elif key in ("budget", "subset_budget"):
                kwargs["subset_budget"] = int(value)
            else:
                raise ValueError(f"unknown limit key '{key}'")
    return derived.DeriveLimits(keep_snapshots=False, **kwargs)


def cmd_gen(args) -> int:
    if args.kind == "uniform":
        m = generators.uniform(args.k, args.n)
    elif args.kind == "graphic":
        m = generators.graphic(Graph.from_dict(_read_json_arg(args.graph)))
    elif args.kind == "vamos":
        m = generators.vamos()
    else:
        m = generators.q6()
    _emit(m.to_dict(), args.out)
    return EXIT_OK


def cmd_derive(args) -> int:
    m = _load_matroid_arg(args.matroid)
    limits = _parse_limits(args.limits)
    result = derived.derive_circuits(m, limits)
    payload = result.to_dict()
    stats = derived.derived_stats(result)
    if args.stats:
        payload["stats"] = stats.to_dict()
        payload["first_step"] = derived.seed_step_breakdown(m).to_dict(m)
    _emit(payload, args.out)
    if args.csv is not None:
        _write_csv(stats.histogram_csv(), args.csv)
    return EXIT_OK if result.complete else EXIT_LIMIT


def cmd_count_dependents(args) -> int:
    m = _load_matroid_arg(args.matroid)
    limits = _parse_limits(args.limits)
    result = derived.derive_circuits(m, limits)
    universe = len(m.circuits)
    count = count_upward_closure(
        Antichain(universe, result.delta.circuits, _trusted=True), universe
    )
    _emit(
        {
            "universe": universe,
            "dependent_sets": count,
            "complete": result.complete,
        },
        args.out,
    )
    return EXIT_OK if result.complete else EXIT_LIMIT


def cmd_ow_derive(args) -> int:
    rep = fieldrep.Representation.from_dict(_read_json_arg(args.matrix))
    base, _ = fieldrep.ow_circuit_matrix(rep)
    delta = fieldrep.ow_derived(rep, base)
    hist: dict[int, int] = {}
    for c in delta.circuits:
        hist[c.bit_count()] = hist.get(c.bit_count(), 0) + 1
    _emit(
        {
            "base": base.to_dict(),
            "delta": delta.to_dict(),
            "circuit_size_histogram": {str(k): v for k, v in sorted(hist.items())},
        },
        args.out,
    )
    if args.csv is not None:
        lines = ["size,count"] + [f"{k},{hist[k]}" for k in sorted(hist)]
        _write_csv("\n".join(lines) + "\n", args.csv)
    return EXIT_OK


def cmd_longyear(args) -> int:
    m = _load_matroid_arg(args.matroid)
    rep = fieldrep.Representation.from_dict(_read_json_arg(args.matrix))
    delta = fieldrep.longyear_derived(m, rep)
    _emit(delta.to_dict(), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    a = _load_matroid_arg(args.first)
    b = _load_matroid_arg(args.second)
    verdict = fieldrep.weak_order_compare(a, b)
    only_a, only_b = fieldrep.circuit_diff(a, b)
    _emit(
        {
            "verdict": verdict.value,
            "circuits_only_in_first": [list(set_of(c)) for c in only_a],
            "circuits_only_in_second": [list(set_of(c)) for c in only_b],
        },
        args.out,
    )
    return EXIT_OK


def cmd_random_rep(args) -> int:
    field = parse_field_argument(args.field)
    rep = fieldrep.random_uniform_rep(args.k, args.n, field, args.seed)
    _emit(rep.to_dict(), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    doc = _read_json_arg(args.file)
    checks: dict = {"file": args.file}
    ok = True
    if "circuits" in doc and "n" in doc:
        checks["kind"] = "matroid"
        try:
            m = Matroid.from_dict(doc)
            report = oracle.check_circuit_axioms(
                [set_of(c) for c in m.circuits]
            )
            checks["circuit_axioms"] = report.to_dict()
            ok = report.ok
        except Exception as exc:  # construction failures are findings, not crashes
            checks["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
    elif "entries" in doc:
        checks["kind"] = "representation"
        try:
            rep = fieldrep.Representation.from_dict(doc)
            checks["full_row_rank"] = True
            checks["rows"] = rep.matrix.rows
            checks["cols"] = rep.matrix.cols
        except Exception as exc:
            checks["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
    elif "sets" in doc and "universe" in doc:
        checks["kind"] = "antichain"
        try:
            Antichain.from_dict(doc)
            checks["antichain"] = True
        except Exception as exc:
            checks["error"] = f"{type(exc).__name__}: {exc}"
            ok = False
    else:
        checks["error"] = "unrecognized file schema"
        ok = False
    checks["ok"] = ok
    _emit(checks, args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmatroid",
        description="derived matroids of circuit-presented matroids",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_out(p):
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("gen", help="generate a matroid")
    gsub = p.add_subparsers(dest="kind", required=True)
    pu = gsub.add_parser("uniform")
    pu.add_argument("k", type=int)
    pu.add_argument("n", type=int)
    add_out(pu)
    pg = gsub.add_parser("graphic")
    pg.add_argument("graph", help="graph JSON file or -")
    add_out(pg)
    for name in ("vamos", "q6"):
        px = gsub.add_parser(name)
        add_out(px)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("derive", help="combinatorial derived matroid")
    p.add_argument("matroid", help="matroid JSON file or -")
    p.add_argument("--limits", help="iter=N,size=N,budget=N")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--csv", nargs="?", const="-", help="size histogram CSV path")
    add_out(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("count-dependents", help="dependent sets of the derived matroid")
    p.add_argument("matroid")
    p.add_argument("--limits")
    add_out(p)
    p.set_defaults(func=cmd_count_dependents)

    p = sub.add_parser("ow-derive", help="derived matroid of a representation")
    p.add_argument("matrix", help="representation JSON file or -")
    p.add_argument("--csv", nargs="?", const="-")
    add_out(p)
    p.set_defaults(func=cmd_ow_derive)

    p = sub.add_parser("longyear", help="binary derived matroid")
    p.add_argument("matroid")
    p.add_argument("matrix", help="GF(2) representation JSON")
    add_out(p)
    p.set_defaults(func=cmd_longyear)

    p = sub.add_parser("compare", help="weak-order comparison of two matroids")
    p.add_argument("first")
    p.add_argument("second")
    add_out(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("random-rep", help="seeded random uniform representation")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--field", required=True, help="Q, a prime, or a prime square")
    p.add_argument("--seed", required=True, type=int)
    add_out(p)
    p.set_defaults(func=cmd_random_rep)

    p = sub.add_parser("validate", help="oracle checks on a JSON file")
    p.add_argument("file")
    add_out(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (derived.CombinatorialBudgetExceeded, UniverseTooLarge) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (
        ParseError,
        FieldError,
        MatroidError,
        fieldrep.RepresentationMismatch,
        fieldrep.GroundSizeMismatch,
        fieldrep.NotACircuit,
        fieldrep.FieldTooSmall,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
