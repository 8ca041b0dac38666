"""Command-line interface.

    mtype-approx quantize --input t.json --M 50 --cost kl-target-first
    mtype-approx sweep    --input t.json --M-min 4 --M-max 60
    mtype-approx markov   --input T.json --M 20
    mtype-approx oracle   --input t.json --M 3 --cost kl-approx-first

Exit codes: 0 ok, 2 invalid input, 3 infeasible, 4 oracle instance too large.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .costs import evaluate, quantize
from .errors import Infeasible, InvalidInput, TooLarge
from .markov import MarkovModel, divergence_rate, graph_preserved, quantize_markov, stationary_distribution
from .oracle import brute_force
from .projection import bound_eq7, bound_eq12, bound_sweep
from .types import CostKind, validate_target

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_TOO_LARGE = 4


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _round(obj):
    """Round every float to 12 significant digits for JSON output."""
    if isinstance(obj, float):
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from None


def load_vector(path: str) -> list:
    """A JSON ``{"probabilities": [...]}`` object (or bare list), else CSV values."""
    text = _read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if data is not None:
        if isinstance(data, dict):
            if "probabilities" not in data:
                raise InvalidInput('JSON input needs a "probabilities" key')
            data = data["probabilities"]
        if not isinstance(data, list):
            raise InvalidInput("probabilities must be a list")
        return data
    values = []
    for row in csv.reader(io.StringIO(text)):
        for cell in row:
            cell = cell.strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise InvalidInput(f"not a number: {cell!r}") from None
    return values


def load_matrix(path: str) -> list:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"matrix input is not valid JSON: {exc}") from None
    if isinstance(data, dict):
        data = data.get("rows", data.get("matrix"))
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise InvalidInput("matrix must be a JSON array of rows")
    return data


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(record: dict, out: str | None) -> None:
    _emit(json.dumps(_round(record), indent=2) + "\n", out)


def cmd_quantize(args) -> int:
    t = validate_target(load_vector(args.input), normalize=args.normalize)
    kind = CostKind.parse(args.cost)
    p = quantize(t, args.M, kind)
    record = {
        "M": p.M,
        "counts": p.counts.tolist(),
        "probabilities": p.probs.tolist(),
        "cost": kind.value,
        "cost_value": evaluate(kind, t, p),
    }
    if kind is CostKind.KL_TARGET_FIRST:
        b7, valid = bound_eq7(t, args.M)
        record.update(bound_eq12=bound_eq12(t, args.M), bound_eq7=b7, bound_eq7_valid=valid)
    _emit_json(record, args.out)
    return EXIT_OK


def sweep_csv(t, M_min: int, M_max: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["M", "exact", "bound_eq12", "bound_eq7", "bound_eq7_valid"])
    for r in bound_sweep(t, M_min, M_max):
        writer.writerow([r.M, fmt(r.exact), fmt(r.bound_eq12), fmt(r.bound_eq7), str(r.bound_eq7_valid).lower()])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    t = validate_target(load_vector(args.input), normalize=args.normalize)
    _emit(sweep_csv(t, args.M_min, args.M_max), args.out)
    return EXIT_OK


def cmd_markov(args) -> int:
    T = MarkovModel(load_matrix(args.input))
    mu = stationary_distribution(T)
    Q = quantize_markov(T, args.M)
    record = {
        "M": Q.M,
        "counts": Q.count_rows.tolist(),
        "stationary": mu.probs.tolist(),
        "divergence_rate": divergence_rate(T, Q),
        "graph_preserved": graph_preserved(T, Q),
    }
    _emit_json(record, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    t = validate_target(load_vector(args.input), normalize=args.normalize)
    kind = CostKind.parse(args.cost)
    result = brute_force(t, args.M, kind)
    try:
        greedy_cost = evaluate(kind, t, quantize(t, args.M, kind))
    except Infeasible:
        greedy_cost = float("inf")
    gap = abs(greedy_cost - result.best_cost) if greedy_cost != result.best_cost else 0.0
    record = {
        "M": args.M,
        "cost": kind.value,
        "counts": list(result.best_counts),
        "cost_value": result.best_cost,
        "num_candidates": result.num_candidates,
        "greedy_cost": greedy_cost,
        "gap": gap,
    }
    _emit_json(record, args.out)
    return EXIT_OK


def _positive_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mtype-approx", description="Optimal M-type approximation of distributions.")
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in CostKind]

    def common(p, cost=False):
        p.add_argument("--input", required=True)
        p.add_argument("--normalize", action="store_true", help="rescale input to sum to one")
        p.add_argument("--out", help="output path (default: stdout)")
        if cost:
            p.add_argument("--cost", required=True, choices=kinds)

    p = sub.add_parser("quantize", help="optimal M-type approximation")
    common(p, cost=True)
    p.add_argument("--M", required=True, type=_positive_int)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("sweep", help="exact D(t||p) and bounds over a range of M (CSV)")
    common(p)
    p.add_argument("--M-min", dest="M_min", required=True, type=_positive_int)
    p.add_argument("--M-max", dest="M_max", required=True, type=_positive_int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("markov", help="row-wise quantization of a transition matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.add_argument("--M", required=True, type=_positive_int)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    common(p, cost=True)
    p.add_argument("--M", required=True, type=_positive_int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sweep" and args.M_min > args.M_max:
        print("error: --M-min must not exceed --M-max", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
