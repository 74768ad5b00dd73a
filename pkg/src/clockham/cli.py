"""Command-line front end.

Exit codes: 0 pass, 1 verification failed, 2 parse error, 3 dimension
guard, 4 promise violated.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._bits import DimensionError
from .circuit import CircuitParseError, StateVector, parse_circuit
from .operators import FormatError, dumps_dense, dumps_hamiltonian, fmt, loads
from .reduction import ReductionParams, build_3local, build_reference, parse_dimacs, sat_to_hamiltonian
from .spectra import min_eigenvalue
from .verify import angle_diagnostic, verify_completeness, verify_soundness

log = logging.getLogger("clockham")

EXIT_PASS, EXIT_FAIL, EXIT_PARSE, EXIT_DIM, EXIT_PROMISE = 0, 1, 2, 3, 4
MODES = {"3local": "three_local", "reference": "reference"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...]
    mode: str = "3local"
    penalty_exponent: int = 12
    epsilon: float = 1e-3
    seed: int = 0
    format: str = "text"
    out: str | None = None

    def __post_init__(self):
        if not 0 < self.epsilon <= 1 / 3:
            raise ValueError(f"epsilon must lie in (0, 1/3], got {self.epsilon}")
        if self.penalty_exponent < 1:
            raise ValueError("penalty exponent must be >= 1")

    @property
    def params(self) -> ReductionParams:
        return ReductionParams(MODES[self.mode], self.penalty_exponent)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def load_proof(path: str, m: int) -> StateVector:
    rows = [ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()]
    rows = [r for r in rows if r]
    if len(rows) != 1 << m:
        raise FormatError(f"proof file has {len(rows)} amplitudes, expected {1 << m}")
    amps = []
    for r in rows:
        re_, _, im = r.partition(",")
        amps.append(complex(float(re_), float(im) if im else 0.0))
    amps = np.array(amps)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise FormatError("proof vector is zero")
    if abs(norm - 1) > 1e-6:
        log.warning("proof norm %.6g differs from 1; normalizing", norm)
    return StateVector(m, amps / norm)


def cmd_compile(cfg: RunConfig) -> int:
    c = parse_circuit(Path(cfg.inputs[0]).read_text())
    if cfg.mode == "reference":
        _emit(dumps_dense(build_reference(c)), cfg.out)
    else:
        _emit(dumps_hamiltonian(build_3local(c, cfg.params)), cfg.out)
    return EXIT_PASS


def cmd_spectrum(cfg: RunConfig) -> int:
    r = min_eigenvalue(loads(Path(cfg.inputs[0]).read_text()), seed=cfg.seed)
    _emit(f"lambda_min = {fmt(r.lambda_min)}\nresidual = {fmt(r.residual)}\n", cfg.out)
    return EXIT_PASS


def cmd_verify(cfg: RunConfig, proof_path: str | None, sound: bool) -> int:
    c = parse_circuit(Path(cfg.inputs[0]).read_text())
    instance = Path(cfg.inputs[0]).stem
    if sound:
        report = verify_soundness(c, cfg.epsilon, cfg.params, instance)
    else:
        report = verify_completeness(c, load_proof(proof_path, c.m), cfg.epsilon, cfg.params, instance)
    _emit(report.to_text(), cfg.out)
    print(report.summary(), file=sys.stderr if not cfg.out else sys.stdout)
    if report.verdict == "promise-violated":
        return EXIT_PROMISE
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_sat2ham(cfg: RunConfig) -> int:
    nvars, clauses = parse_dimacs(Path(cfg.inputs[0]).read_text())
    _emit(dumps_hamiltonian(sat_to_hamiltonian(clauses, nvars)), cfg.out)
    return EXIT_PASS


def cmd_angle(cfg: RunConfig) -> int:
    c = parse_circuit(Path(cfg.inputs[0]).read_text())
    cos, sin2_T = angle_diagnostic(c)
    _emit(f"cos_theta = {fmt(cos)}\nsin2_theta_T = {fmt(sin2_T)}\n", cfg.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=sorted(MODES), default="3local")
    common.add_argument("--penalty-exponent", type=int, default=12)
    common.add_argument("--epsilon", type=float, default=1e-3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--format", choices=["text"], default="text")

    p = argparse.ArgumentParser(prog="clockham", description="Circuit-to-3-local-Hamiltonian compiler and verifier")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("compile", parents=[common], help="circuit -> Hamiltonian").add_argument("input")
    sub.add_parser("spectrum", parents=[common], help="smallest eigenvalue of a Hamiltonian file").add_argument("input")
    v = sub.add_parser("verify", parents=[common], help="certify completeness or soundness")
    v.add_argument("input")
    group = v.add_mutually_exclusive_group(required=True)
    group.add_argument("--complete", metavar="PROOF", help="proof vector file (2^m lines of re,im)")
    group.add_argument("--sound", action="store_true")
    sub.add_parser("sat2ham", parents=[common], help="DIMACS CNF -> diagonal Hamiltonian").add_argument("input")
    sub.add_parser("angle", parents=[common], help="null-space angle diagnostic").add_argument("input")
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, (args.input,), args.mode, args.penalty_exponent,
                        args.epsilon, args.seed, args.format, args.out)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    try:
        if cfg.command == "verify":
            return cmd_verify(cfg, args.complete, args.sound)
        handler = {"compile": cmd_compile, "spectrum": cmd_spectrum, "sat2ham": cmd_sat2ham, "angle": cmd_angle}
        return handler[cfg.command](cfg)
    except DimensionError as exc:
        log.error("%s", exc)
        return EXIT_DIM
    except (CircuitParseError, FormatError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
