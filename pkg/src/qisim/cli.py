"""Command-line front end: ``qisim search | enumerate | experiment``.

Exit codes: 0 success, 1 usage or parse error, 2 no solution (null
interference or unverified sample), 3 enumeration hit the round cap.
Output is deterministic for a given set of flags and seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .engine import SearchConfig, Termination, enumerate_solutions, run_search
from .errors import DimacsError, NullInterference, QisimError
from .oracle import BUILTINS, Oracle, index_to_bits, parse_dimacs
from .optics import (
    Attenuator,
    ElementRef,
    InterferometerSpec,
    Polarizer,
    Rotator,
    V,
    polarization_label,
    run_interferometer,
    sweep_angles,
    sweep_to_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_NO_SOLUTION, EXIT_ROUND_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    # repr() of a float is the shortest string that round-trips
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False, allow_nan=False) + "\n"


def _manifest(command: str, config: dict, seed: int | None) -> dict:
    return {"command": command, "config": config, "version": f"qisim {__version__}",
            "master_seed": seed}


def _load_oracle(args) -> tuple[Oracle, int]:
    if args.cnf is not None:
        try:
            text = Path(args.cnf).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.cnf}: {exc.strerror}") from None
        formula = parse_dimacs(text)
        if args.n is not None and args.n != formula.num_vars:
            raise UsageError(f"--n {args.n} does not match {formula.num_vars} variables in {args.cnf}")
        return Oracle.from_cnf(formula, name=Path(args.cnf).name), formula.num_vars
    if args.builtin == "eq7demo":
        return Oracle.builtin("eq7demo", args.n), 3
    if args.n is None:
        raise UsageError(f"--n is required for builtin {args.builtin!r}")
    if args.builtin == "single-solution":
        if args.solution is None:
            raise UsageError("--solution is required for builtin 'single-solution'")
        return Oracle.builtin("single-solution", args.n, args.solution), args.n
    return Oracle.builtin(args.builtin, args.n), args.n


def _search_config(args) -> SearchConfig:
    try:
        return SearchConfig(delta=args.delta, repetitions=args.reps, shots=args.shots,
                            master_seed=args.seed,
                            max_rounds=getattr(args, "max_rounds", None))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config_echo(oracle: Oracle, n: int, config: SearchConfig) -> dict:
    return {"oracle": oracle.name, "n": n, "delta": config.delta,
            "repetitions": config.repetitions, "shots": config.shots,
            "null_tolerance": config.null_tolerance,
            "max_rounds": config.round_cap(n)}


def _outcome_json(outcome, n: int) -> dict:
    return {
        "sampled": index_to_bits(outcome.sampled_index, n),
        "verified": outcome.verified,
        "probabilities": {index_to_bits(i, n): p
                          for i, p in sorted(outcome.post_state_probabilities.items())},
        "counts": {index_to_bits(i, n): c for i, c in sorted(outcome.histogram.counts.items())},
    }


def _search_csv(doc: dict) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(doc["manifest"], sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["basis", "probability", "count", "sampled", "verified"])
    if doc["terminated_by"] is None:
        counts = doc["counts"]
        for bits, p in doc["probabilities"].items():
            w.writerow([bits, repr(p), counts.get(bits, 0), bits == doc["sampled"],
                        doc["verified"] if bits == doc["sampled"] else ""])
    return buf.getvalue()


def cmd_search(args, out) -> int:
    oracle, n = _load_oracle(args)
    config = _search_config(args)
    doc = {"manifest": _manifest("search", _config_echo(oracle, n, config), config.master_seed)}
    try:
        outcome = run_search(oracle, n, (), config)
    except NullInterference:
        doc.update(sampled=None, verified=False, probabilities={}, counts={},
                   terminated_by=Termination.NULL_INTERFERENCE.value)
        code = EXIT_NO_SOLUTION
    else:
        doc.update(_outcome_json(outcome, n), terminated_by=None)
        code = EXIT_OK if outcome.verified else EXIT_NO_SOLUTION
    out.write(_search_csv(doc) if args.format == "csv" else _dump(doc))
    return code


def cmd_enumerate(args, out) -> int:
    oracle, n = _load_oracle(args)
    config = _search_config(args)
    report = enumerate_solutions(oracle, n, config)
    doc = {
        "manifest": _manifest("enumerate", _config_echo(oracle, n, config), config.master_seed),
        "found": [index_to_bits(i, n) for i in sorted(report.found)],
        "discovery_order": [index_to_bits(i, n) for i in report.found],
        "rounds": report.rounds,
        "terminated_by": report.terminated_by.value,
        "per_round": [_outcome_json(o, n) for o in report.per_round_outcomes],
    }
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(doc["manifest"], sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "sampled", "verified"])
        for k, o in enumerate(doc["per_round"], start=1):
            w.writerow([k, o["sampled"], o["verified"]])
        buf.write(f"# terminated_by: {doc['terminated_by']}\n")
        out.write(buf.getvalue())
    else:
        out.write(_dump(doc))
    return EXIT_ROUND_CAP if report.terminated_by is Termination.ROUND_CAP else EXIT_OK


def _jones_json(j) -> dict | None:
    if j is None:
        return None
    return {"h": [j.h.real, j.h.imag], "v": [j.v.real, j.v.imag]}


def _parse_sweep(text: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--sweep expects start:stop:step, got {text!r}") from None
    if step == 0 or (stop - start) / step < 0:
        raise UsageError(f"--sweep {text!r} does not reach stop from start")
    count = math.floor((stop - start) / step + 1e-9) + 1
    return [start + k * step for k in range(count)]


def cmd_experiment(args, out) -> int:
    kind = Rotator if args.element == "rotator" else Polarizer
    arm_a = [kind(args.theta_a)]
    if args.eta is not None:
        try:
            arm_a.append(Attenuator(args.eta))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    spec = InterferometerSpec(V, tuple(arm_a), (kind(args.theta_b),), 0.5)
    config = {"input": "V", "element": args.element, "theta_a": args.theta_a,
              "theta_b": args.theta_b, "eta": args.eta, "split_ratio": spec.split_ratio,
              "sweep": args.sweep}
    manifest = _manifest("experiment", config, None)
    if args.sweep is not None:
        values = _parse_sweep(args.sweep)
        rows = sweep_angles(spec, ElementRef("a", 0), values)
        if args.format == "json":
            out.write(_dump({"manifest": manifest, "rows": [
                {"theta_a": r.value, "detection_probability": r.detection_probability,
                 "vertical_leakage": None if math.isnan(r.vertical_leakage) else r.vertical_leakage}
                for r in rows]}))
        else:
            out.write(sweep_to_csv(rows, "manifest: " + json.dumps(manifest, sort_keys=True),
                                   column="theta_a"))
        return EXIT_OK
    result = run_interferometer(spec)
    leak = result.vertical_leakage()
    doc = {
        "manifest": manifest,
        "raw_output": _jones_json(result.raw_output),
        "detection_probability": result.detection_probability,
        "normalized_output": polarization_label(result.normalized_output),
        "normalized_vector": _jones_json(result.normalized_output),
        "vertical_leakage": None if math.isnan(leak) else leak,
    }
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["detection_probability", "normalized_output", "vertical_leakage"])
        w.writerow([repr(result.detection_probability), doc["normalized_output"] or "",
                    "" if doc["vertical_leakage"] is None else repr(leak)])
        out.write(buf.getvalue())
    else:
        out.write(_dump(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qisim", description="Interference search simulator.")
    parser.add_argument("--version", action="version", version=f"qisim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def oracle_flags(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--cnf", metavar="PATH", help="DIMACS CNF file")
        src.add_argument("--builtin", choices=BUILTINS)
        p.add_argument("--n", type=int, help="qubit count (required for builtins)")
        p.add_argument("--solution", help="bit string for the single-solution builtin")
        p.add_argument("--delta", type=float, default=0.0)
        p.add_argument("--reps", type=int, default=1)
        p.add_argument("--shots", type=int, default=1024)
        p.add_argument("--seed", type=int, default=0)

    def format_flags(p, default="json"):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="format", action="store_const", const="json")
        fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
        p.set_defaults(format=default)

    p = sub.add_parser("search", help="one interference search round")
    oracle_flags(p)
    format_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("enumerate", help="find all solutions by exclusion")
    oracle_flags(p)
    p.add_argument("--max-rounds", type=int, default=None)
    format_flags(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("experiment", help="polarization test interferometer")
    p.add_argument("--element", choices=("rotator", "polarizer"), default="rotator")
    p.add_argument("--theta-a", type=float, default=45.0)
    p.add_argument("--theta-b", type=float, default=-45.0)
    p.add_argument("--sweep", metavar="START:STOP:STEP", help="sweep theta-a, CSV output")
    p.add_argument("--eta", type=float, default=None, help="attenuator appended to arm a")
    format_flags(p, default=None)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if args.command == "experiment" and args.format is None:
        args.format = "csv" if args.sweep is not None else "json"
    try:
        return args.func(args, out)
    except DimacsError as exc:
        print(f"qisim: {args.cnf}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, QisimError, ValueError) as exc:
        print(f"qisim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
