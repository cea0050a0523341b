"""
Command line entry point.

    projlattice gen --kind trace_form --shape 3,4 --seed 1 --out mu.json
    projlattice reconstruct --in mu.json
    projlattice audit --in mu.json
    projlattice norms --in mu.json
    projlattice demo --grid 2048 --out cubic.csv

Reports go to stdout (or ``--out``) as JSON; diagnostics go to stderr.
Exit codes: 0 extended, 2 I2 obstruction, 3 not a measure, 64 unreadable
input, 65 measure cannot be evaluated where needed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import io
from .algebra import AlgebraShape, Element, random_selfadjoint
from .counterexamples import (
    CHEBYSHEV_CUBIC_GAP,
    DEFAULT_GRID,
    certificate_table,
    cubic_measure,
    nonlinearity_residual,
)
from .exceptions import UnevaluableError, UnsupportedMeasureError
from .extension import (
    Status,
    functional_norm_bound,
    linearity_audit,
    reconstruct,
)
from .measures import Table, TraceForm, additivity_check, variation_and_alpha

EXIT_CODES = {
    Status.EXTENDED: 0,
    Status.I2_OBSTRUCTION: 2,
    Status.NOT_A_MEASURE: 3,
}
EXIT_USAGE = 64
EXIT_UNEVALUABLE = 65


@dataclass
class RunConfig:
    command: str
    shape: AlgebraShape
    seed: int = 0
    tol: float = 1e-8
    samples: int = 64
    grid: int = DEFAULT_GRID
    kind: str = "trace_form"
    input: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("--tol must be positive")
        if self.samples < 1:
            raise ValueError("--samples must be >= 1")


def parse_shape(text: str) -> AlgebraShape:
    text = text.strip().strip("[]")
    return AlgebraShape(tuple(int(t) for t in text.split(",") if t.strip()))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="projlattice",
                                     description="Linear extension of measures on projection lattices.")
    parser.add_argument("command", choices=["gen", "reconstruct", "audit", "demo", "norms"])
    parser.add_argument("--shape", type=parse_shape, default=AlgebraShape((3,)))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=1e-8)
    parser.add_argument("--samples", type=int, default=64)
    parser.add_argument("--grid", type=int, default=DEFAULT_GRID)
    parser.add_argument("--kind", choices=["trace_form", "frame2", "table"], default="trace_form",
                        help="fixture type for gen")
    parser.add_argument("--in", dest="input")
    parser.add_argument("--out", dest="output")
    return parser


def _emit(doc, config: RunConfig):
    text = io.dumps(doc)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(config: RunConfig):
    if not config.input:
        raise io.FormatError("--in is required for this command")
    return io.load_measure(config.input)


def run_gen(config: RunConfig) -> int:
    if config.kind == "trace_form":
        mu = TraceForm(random_selfadjoint(config.shape, config.seed))
    elif config.kind == "frame2":
        mu = cubic_measure()
    else:
        mu = Table.trace_power(config.shape, 2)
    _emit(io.measure_to_json(mu), config)
    return 0


def run_reconstruct(config: RunConfig) -> int:
    mu = _load(config)
    result = reconstruct(mu, tol=config.tol, verify_samples=config.samples, seed=config.seed)
    _emit(io.result_to_json(result), config)
    print(f"status={result.status.value} residual={result.residual:.3e}", file=sys.stderr)
    return EXIT_CODES[result.status]


def run_audit(config: RunConfig) -> int:
    mu = _load(config)
    trials = max(config.samples, 1)
    doc = {
        "additivity": io.additivity_to_json(additivity_check(mu, trials, config.seed)),
        "linearity": io.audit_to_json(linearity_audit(mu, trials, config.seed)),
    }
    if isinstance(mu, TraceForm):
        try:
            a1 = variation_and_alpha(mu, Element.identity(mu.shape)).alpha
        except UnsupportedMeasureError:
            doc["identity"] = None
        else:
            lhs = 2 * a1 - mu.evaluate(Element.identity(mu.shape)).real
            rhs = functional_norm_bound(mu.rho, 1, config.seed).trace_norm
            doc["identity"] = {"two_alpha_minus_mu1": lhs, "trace_norm": rhs,
                               "deviation": abs(lhs - rhs)}
    _emit(doc, config)
    return 0


def run_norms(config: RunConfig) -> int:
    mu = _load(config)
    if not isinstance(mu, TraceForm):
        raise io.FormatError("norms needs a trace_form measure")
    _emit(io.norms_to_json(functional_norm_bound(mu.rho, config.samples, config.seed)), config)
    return 0


def run_demo(config: RunConfig) -> int:
    mu = cubic_measure()
    cert = nonlinearity_residual(mu, config.grid)
    csv_path = config.output or "cubic_certificate.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n_z", "mu", "best_fit"])
        for row in certificate_table(mu, cert):
            writer.writerow([repr(float(v)) for v in row])
    doc = {
        "measure": io.measure_to_json(mu),
        "grid": cert.grid_size,
        "residual": cert.residual,
        "witness": list(cert.witness.n),
        "best_fit": io.element_to_json(cert.best_fit),
        "asymptote": CHEBYSHEV_CUBIC_GAP,
        "csv": csv_path,
    }
    sys.stdout.write(io.dumps(doc))
    print(f"cubic frame measure: minimax residual {cert.residual:.6f} on {cert.grid_size} points "
          f"(dense-grid limit {CHEBYSHEV_CUBIC_GAP})", file=sys.stderr)
    return 0


COMMANDS = {
    "gen": run_gen,
    "reconstruct": run_reconstruct,
    "audit": run_audit,
    "norms": run_norms,
    "demo": run_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else 0
    try:
        config = RunConfig(command=args.command, shape=args.shape, seed=args.seed, tol=args.tol,
                           samples=args.samples, grid=args.grid, kind=args.kind,
                           input=args.input, output=args.output)
        return COMMANDS[config.command](config)
    except (io.FormatError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnevaluableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNEVALUABLE


if __name__ == "__main__":
    sys.exit(main())
