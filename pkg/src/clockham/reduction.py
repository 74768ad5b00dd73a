"""Circuit-to-Hamiltonian compilers.

``build_3local`` emits the unary-clock construction on ``N + T`` qubits:
paper clock qubit ``t`` (1-based) is global qubit ``N + t - 1``. Each
propagation block ``H_prop,t`` is stored as up to three Hermitian terms
sharing the label ``prop:t``: two clock projectors and the hopping pair
``-(U_t ⊗ |1><0|_t + h.c.)`` with weight 1/2.

``build_reference`` realises the explicit-clock construction on
``2^N * (T+1)`` dimensions with basis index ``t * 2^N + x``. The legal
subspace of the 3-local layout is ordered the same way, which is what makes
``compress_legal`` a pure basis renaming.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from ._bits import DimensionError, apply_local, check_qubits
from .circuit import Circuit, StateVector, initial_state
from .operators import LocalHamiltonian, LocalTerm, embed_matrix

P0 = np.diag([1.0, 0.0]).astype(complex)
P1 = np.diag([0.0, 1.0]).astype(complex)
RAISE = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
# |10>_{a,b} on an (a, b) pair and |01>_{i,j}; local index = b(a) + 2 b(b)
P10 = np.diag([0, 1, 0, 0]).astype(complex)
P01 = np.diag([0, 0, 1, 0]).astype(complex)

REFERENCE_MAX_DIM = 1 << 14


@dataclass(frozen=True)
class ReductionParams:
    mode: Literal["three_local", "reference"] = "three_local"
    penalty_exponent: int = 12
    penalty_override: float | None = None

    def __post_init__(self):
        if self.mode not in ("three_local", "reference"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.penalty_exponent < 1:
            raise ValueError("penalty_exponent must be >= 1")
        if self.penalty_override is not None and not self.penalty_override > 0:
            raise ValueError("penalty_override must be positive")

    def penalty(self, T: int) -> float:
        if self.penalty_override is not None:
            return float(self.penalty_override)
        return float(T) ** self.penalty_exponent


@dataclass(frozen=True)
class ClockState:
    t: int

    def bits(self, T: int) -> tuple[int, ...]:
        if not 0 <= self.t <= T:
            raise ValueError(f"clock value {self.t} outside [0, {T}]")
        return (1,) * self.t + (0,) * (T - self.t)

    def index(self, T: int) -> int:
        """Clock-register integer of ``|t^>`` (clock qubit 1 is the low bit)."""
        self.bits(T)
        return (1 << self.t) - 1


def clock_qubit(c: Circuit, t: int) -> int:
    return c.N + t - 1


def _hop(c: Circuit, t: int) -> LocalTerm:
    g = c.gates[t - 1]
    U = g.matrix
    # local order: gate targets (bits 0..k-1), then the clock qubit
    fwd = np.kron(RAISE, U)
    return LocalTerm.on(f"prop:{t}", list(g.targets) + [clock_qubit(c, t)], -(fwd + fwd.conj().T), 0.5)


def _prop_terms(c: Circuit, t: int) -> list[LocalTerm]:
    T = c.T
    label = f"prop:{t}"
    q = lambda s: clock_qubit(c, s)  # noqa: E731
    if T == 1:
        # both boundary forms collapse to 1/2 (I - U ⊗ |1><0| - h.c.)
        return [LocalTerm(label, (q(1),), np.eye(2), 0.5), _hop(c, 1)]
    if t == 1:
        head = [LocalTerm.on(label, (q(1), q(2)), P10, 0.5), LocalTerm(label, (q(1),), P0, 0.5)]
    elif t == T:
        head = [LocalTerm(label, (q(T),), P1, 0.5), LocalTerm.on(label, (q(T - 1), q(T)), P10, 0.5)]
    else:
        head = [LocalTerm.on(label, (q(t), q(t + 1)), P10, 0.5), LocalTerm.on(label, (q(t - 1), q(t)), P10, 0.5)]
    return head + [_hop(c, t)]


def build_3local(c: Circuit, params: ReductionParams | None = None) -> LocalHamiltonian:
    params = params or ReductionParams()
    T, N = c.T, c.N
    n = N + T
    check_qubits(n)
    terms: list[LocalTerm] = []
    for i in range(c.m, N):
        terms.append(LocalTerm.on(f"in:{i}", (i, clock_qubit(c, 1)), np.kron(P0, P1)))
    terms.append(LocalTerm.on("out:0", (0, clock_qubit(c, T)), np.kron(P1, P0)))
    for t in range(1, T + 1):
        terms.extend(_prop_terms(c, t))
    penalty = params.penalty(T)
    for i in range(1, T + 1):
        for j in range(i + 1, T + 1):
            terms.append(LocalTerm(f"clock:{i},{j}", (clock_qubit(c, i), clock_qubit(c, j)), P01, penalty))
    return LocalHamiltonian(n, terms)


def computation_part(H: LocalHamiltonian) -> LocalHamiltonian:
    """``H_comp = H_in + H_out + H_prop``."""
    return H.select("in", "out", "prop")


# --- reference construction --------------------------------------------------

def _check_reference(c: Circuit) -> int:
    dim = (1 << c.N) * (c.T + 1)
    if dim > REFERENCE_MAX_DIM:
        raise DimensionError(f"reference dimension {dim} exceeds {REFERENCE_MAX_DIM}")
    return dim


def _clock_unit(T: int, a: int, b: int) -> sp.csr_matrix:
    return sp.csr_matrix(([1.0], ([a], [b])), shape=(T + 1, T + 1))


def reference_parts(c: Circuit) -> dict[str, sp.csr_matrix]:
    """``H_in``, ``H_out`` and ``H_prop`` of the explicit-clock construction."""
    _check_reference(c)
    N, T = c.N, c.T
    d = 1 << N
    I = sp.identity(d, format="csr", dtype=complex)
    h_in = sp.csr_matrix((d * (T + 1),) * 2, dtype=complex)
    for i in range(c.m, N):
        h_in = h_in + sp.kron(_clock_unit(T, 0, 0), embed_matrix(P1, [i], N), format="csr")
    h_out = sp.kron(_clock_unit(T, T, T), embed_matrix(P0, [0], N), format="csr")
    h_prop = sp.csr_matrix((d * (T + 1),) * 2, dtype=complex)
    for t in range(1, T + 1):
        g = c.gates[t - 1]
        U = embed_matrix(g.matrix, g.targets, N)
        fwd = sp.kron(_clock_unit(T, t, t - 1), U, format="csr")
        h_prop = h_prop + 0.5 * (
            sp.kron(_clock_unit(T, t, t), I) + sp.kron(_clock_unit(T, t - 1, t - 1), I) - fwd - fwd.conj().T
        )
    return {"in": h_in.tocsr(), "out": h_out.tocsr(), "prop": h_prop.tocsr()}


def build_reference(c: Circuit, sparse: bool = False):
    parts = reference_parts(c)
    total = parts["in"] + parts["out"] + parts["prop"]
    return total if sparse else total.toarray()


# --- history states and the legal subspace -----------------------------------

def _trajectory(c: Circuit, proof) -> np.ndarray:
    """Rows ``U_t .. U_1 |xi, 0>`` for t = 0..T."""
    state = initial_state(c, proof)
    rows = [state]
    for g in c.gates:
        state = apply_local(state, g.matrix, g.targets, c.N)
        rows.append(state)
    return np.array(rows)


def reference_history_state(c: Circuit, proof) -> np.ndarray:
    """History state in the explicit-clock basis (length ``2^N (T+1)``)."""
    return (_trajectory(c, proof) / np.sqrt(c.T + 1)).reshape(-1)


def history_state(c: Circuit, proof) -> StateVector:
    """History state on the ``N + T`` qubits of the unary-clock layout."""
    traj = _trajectory(c, proof) / np.sqrt(c.T + 1)
    check_qubits(c.N + c.T)
    out = np.zeros(1 << (c.N + c.T), dtype=complex)
    for t, row in enumerate(traj):
        start = ClockState(t).index(c.T) << c.N
        out[start:start + (1 << c.N)] = row
    return StateVector(c.N + c.T, out)


def legal_indices(N: int, T: int) -> np.ndarray:
    """Global indices of ``x ⊗ |t^>``, ordered by t then x."""
    check_qubits(N + T)
    x = np.arange(1 << N)
    return np.concatenate([x + (ClockState(t).index(T) << N) for t in range(T + 1)])


def is_legal_clock(bits: int, T: int) -> bool:
    return bits & (bits + 1) == 0 and bits < (1 << T)


def legal_projector(N: int, T: int) -> sp.csr_matrix:
    dim = 1 << (N + T)
    diag = np.zeros(dim)
    diag[legal_indices(N, T)] = 1.0
    return sp.diags(diag, format="csr")


def compress_legal(op, N: int, T: int) -> np.ndarray:
    """``Π op Π`` written in the basis ``{x ⊗ |t^>}``."""
    idx = legal_indices(N, T)
    if sp.issparse(op):
        return op.tocsr()[idx][:, idx].toarray()
    return np.asarray(op)[np.ix_(idx, idx)]


def decompose_legal(state, N: int, T: int):
    """Split ``state = a1 |eta1> + a2 |eta2>`` into legal / illegal parts."""
    v = state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex)
    mask = np.zeros(v.size, dtype=bool)
    mask[legal_indices(N, T)] = True
    legal = np.where(mask, v, 0)
    illegal = np.where(mask, 0, v)
    a1, a2 = np.linalg.norm(legal), np.linalg.norm(illegal)
    total = np.hypot(a1, a2)
    eta1 = legal / a1 if a1 > 0 else np.zeros_like(v)
    eta2 = illegal / a2 if a2 > 0 else np.zeros_like(v)
    return float(a1 / total), eta1, float(a2 / total), eta2


# --- SAT ---------------------------------------------------------------------

def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    nvars = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            nvars = int(toks[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise ValueError("last clause is not terminated by 0")
    if nvars is None:
        raise ValueError("missing 'p cnf' header")
    return nvars, clauses


def sat_to_hamiltonian(clauses: list[list[int]], nvars: int | None = None) -> LocalHamiltonian:
    """One diagonal projector per clause onto its unique violating assignment.

    Variable ``v`` (1-based, DIMACS) lives on qubit ``v - 1``.
    """
    if nvars is None:
        nvars = max((abs(lit) for cl in clauses for lit in cl), default=0)
    terms = []
    for j, clause in enumerate(clauses):
        if not 1 <= len(clause) <= 3:
            raise ValueError(f"clause {j} has {len(clause)} literals; need 1..3")
        vars_ = [abs(lit) for lit in clause]
        if len(set(vars_)) != len(vars_):
            raise ValueError(f"clause {j} repeats a variable")
        if max(vars_) > nvars:
            raise ValueError(f"clause {j} uses variable beyond {nvars}")
        # a positive literal is violated by 0, a negative one by 1
        bad = sum((lit < 0) << pos for pos, lit in enumerate(clause))
        proj = np.zeros((1 << len(clause),) * 2, dtype=complex)
        proj[bad, bad] = 1
        terms.append(LocalTerm.on(f"sat:{j}", [v - 1 for v in vars_], proj))
    return LocalHamiltonian(nvars, terms)
