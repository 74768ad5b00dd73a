"""Certify completeness and soundness of the unary-clock construction on
concrete circuits, and emit key-value reports."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .circuit import Circuit, acceptance_probability, optimal_acceptance
from .operators import LocalHamiltonian, assemble, fmt, norm_bound
from .reduction import (
    ReductionParams,
    build_3local,
    build_reference,
    compress_legal,
    computation_part,
    history_state,
    is_legal_clock,
    reference_parts,
)
from .spectra import min_eigenvalue, nullspace_basis, principal_angle, rayleigh

log = logging.getLogger(__name__)

PASS_TOL = 1e-10
CHAIN_TOL = 1e-9

Verdict = Literal["complete-ok", "sound-ok", "fail", "promise-violated"]


@dataclass
class VerificationReport:
    instance_id: str
    mode: str
    N: int
    m: int
    T: int
    epsilon: float
    p_max: float
    lambda_min_3local: float
    lambda_min_reference: float
    a: float
    chain_slack: float
    c_est: float
    sin2_theta_T: float
    penalty_floor_ok: bool
    equivalence_maxdiff: float
    verdict: Verdict

    def to_text(self) -> str:
        return "".join(f"{k} = {_fmt_value(v)}\n" for k, v in dataclasses.asdict(self).items())

    def summary(self) -> str:
        return " ".join(f"{k}={_fmt_value(v)}" for k, v in dataclasses.asdict(self).items())

    @property
    def passed(self) -> bool:
        return self.verdict in ("complete-ok", "sound-ok")


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition(" = ")
            out[key.strip()] = value.strip()
    return out


# --- audits ------------------------------------------------------------------

def clock_energies(H: LocalHamiltonian, N: int, T: int) -> np.ndarray:
    """``<e|H_clock|e>`` for every computational basis state ``e`` of N+T qubits."""
    return np.real(assemble(H.select("clock"), sparse=True).diagonal())


def clock_penalty_audit(H: LocalHamiltonian, T: int, penalty: float, N: int | None = None) -> bool:
    """Every illegal clock string carries at least ``penalty``; legal ones zero.

    Also reports (without failing) when the term-norm bound on ``H_comp``
    exceeds ``4T``, which the bound only promises for ``T >= N``.
    """
    N = H.n - T if N is None else N
    energy = clock_energies(H, N, T)
    clocks = np.arange(energy.size) >> N
    legal = np.array([is_legal_clock(int(b), T) for b in range(1 << T)])[clocks]
    ok = bool(np.all(energy[~legal] >= penalty) and np.all(energy[legal] == 0))
    bound = norm_bound(computation_part(H))
    if bound > 4 * T:
        if T >= N:
            log.error("H_comp term-norm sum %.6g exceeds 4T = %d", bound, 4 * T)
            ok = False
        else:
            log.warning("H_comp term-norm sum %.6g exceeds 4T = %d (T < N, bound not promised)", bound, 4 * T)
    return ok


def violating_pairs(bits: int, T: int) -> int:
    """Number of pairs i < j with clock bit i = 0 and bit j = 1 (1-based)."""
    b = [(bits >> k) & 1 for k in range(T)]
    return sum(1 for i, j in itertools.combinations(range(T), 2) if b[i] == 0 and b[j] == 1)


def angle_diagnostic(c: Circuit) -> tuple[float, float]:
    """cos of the angle between the null spaces of ``H_in + H_out`` and
    ``H_prop`` (reference construction), and ``sin^2(theta) * T``."""
    parts = reference_parts(c)
    ker_check = nullspace_basis(parts["in"] + parts["out"])
    ker_prop = nullspace_basis(parts["prop"])
    cos = principal_angle(ker_check, ker_prop)
    return cos, (1 - cos * cos) * c.T


def decide(op, a: float, b: float, tol: float = PASS_TOL):
    """1 if ``lambda_min <= a``, 0 if ``lambda_min > b``, else 'promise-violated'."""
    if not b > a:
        raise ValueError("need b > a")
    lam = min_eigenvalue(op).lambda_min
    if lam <= a + tol:
        return 1
    if lam > b - tol:
        return 0
    return "promise-violated"


def default_b(c: Circuit) -> float:
    """``0.5 * c_est / T^3``, i.e. half the reference ground energy."""
    lam_ref = min_eigenvalue(build_reference(c)).lambda_min
    return 0.5 * lam_ref


def energy_identity_check(c: Circuit, proof, params: ReductionParams | None = None) -> float:
    """``|<eta|H|eta> - (1 - p_acc)/(T+1)|`` for the history state ``eta``."""
    H = assemble(build_3local(c, params), sparse=True)
    energy = rayleigh(H, history_state(c, proof))
    p = acceptance_probability(c, proof)
    return abs(energy - (1 - p) / (c.T + 1))


# --- the two lemmas ----------------------------------------------------------

def _measure(c: Circuit, params: ReductionParams, epsilon: float, mode: str, instance_id: str) -> tuple[VerificationReport, object]:
    H3 = build_3local(c, params)
    full = assemble(H3)
    lam3 = min_eigenvalue(full).lambda_min
    ref = build_reference(c)
    lam_ref = min_eigenvalue(ref).lambda_min
    comp = assemble(computation_part(H3))
    maxdiff = float(np.max(np.abs(compress_legal(comp, c.N, c.T) - ref)))
    p_max, _ = optimal_acceptance(c)
    _, sin2_T = angle_diagnostic(c)
    report = VerificationReport(
        instance_id=instance_id,
        mode=mode,
        N=c.N,
        m=c.m,
        T=c.T,
        epsilon=float(epsilon),
        p_max=p_max,
        lambda_min_3local=lam3,
        lambda_min_reference=lam_ref,
        a=epsilon / (c.T + 1),
        chain_slack=lam3 - (lam_ref - 9 / c.T**4),
        c_est=lam_ref * c.T**3,
        sin2_theta_T=sin2_T,
        penalty_floor_ok=clock_penalty_audit(H3, c.T, params.penalty(c.T), c.N),
        equivalence_maxdiff=maxdiff,
        verdict="fail",
    )
    for name in ("lambda_min_3local", "lambda_min_reference", "chain_slack", "c_est", "sin2_theta_T"):
        if not math.isfinite(getattr(report, name)):
            raise ArithmeticError(f"non-finite {name}")
    return report, full


def verify_completeness(c: Circuit, proof, epsilon: float, params: ReductionParams | None = None,
                        instance_id: str = "circuit") -> VerificationReport:
    params = params or ReductionParams()
    report, full = _measure(c, params, epsilon, "completeness", instance_id)
    p_acc = acceptance_probability(c, proof)
    if not p_acc > 1 - epsilon:
        report.verdict = "promise-violated"
        return report
    energy = rayleigh(full, history_state(c, proof))
    ok = energy <= report.a + PASS_TOL and report.lambda_min_3local <= report.a + PASS_TOL
    report.verdict = "complete-ok" if ok else "fail"
    return report


def verify_soundness(c: Circuit, epsilon: float, params: ReductionParams | None = None,
                     instance_id: str = "circuit") -> VerificationReport:
    params = params or ReductionParams()
    report, _ = _measure(c, params, epsilon, "soundness", instance_id)
    if not report.p_max < epsilon:
        report.verdict = "promise-violated"
        return report
    floor = min(1.0, report.lambda_min_reference - 9 / c.T**4)
    ok = report.lambda_min_3local >= floor - CHAIN_TOL and report.lambda_min_reference > 0
    report.verdict = "sound-ok" if ok else "fail"
    return report
