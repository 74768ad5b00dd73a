"""Verifier circuits: representation, text parser, exact simulation and the
optimal-acceptance oracle."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

import numpy as np

from ._bits import apply_local, check_qubits

log = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12

_S2 = 1 / np.sqrt(2)
NAMED_GATES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "TG": np.diag([1, np.exp(1j * np.pi / 4)]),
    # local index = b(control) + 2 b(target)
    "CNOT": np.eye(4, dtype=complex)[[0, 3, 2, 1]],
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
}


class CircuitParseError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    targets: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        targets = tuple(int(q) for q in self.targets)
        object.__setattr__(self, "targets", targets)
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        if len(targets) not in (1, 2) or len(set(targets)) != len(targets):
            raise ValueError(f"gate {self.name}: need 1 or 2 distinct targets, got {targets}")
        if min(targets) < 0:
            raise ValueError(f"gate {self.name}: negative qubit index")
        dim = 1 << len(targets)
        if mat.shape != (dim, dim):
            raise ValueError(f"gate {self.name}: matrix shape {mat.shape} does not match arity")
        dev = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
        if dev > UNITARY_TOL:
            raise ValueError(f"gate {self.name}: not unitary (deviation {dev:.3g})")

    @classmethod
    def named(cls, name: str, *targets: int) -> Gate:
        if name not in NAMED_GATES:
            raise ValueError(f"unknown gate {name!r}")
        return cls(name, targets, NAMED_GATES[name])

    @property
    def arity(self) -> int:
        return len(self.targets)


@dataclass(frozen=True, eq=False)
class Circuit:
    """Gates ``U_1 .. U_T`` in application order on ``N`` qubits.

    Qubits ``0..m-1`` hold the proof, the rest start in ``|0>``. Qubit 0 is
    the output qubit.
    """

    N: int
    m: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not 1 <= self.m <= self.N:
            raise ValueError(f"need 1 <= m <= N, got m={self.m}, N={self.N}")
        if not self.gates:
            raise ValueError("a circuit needs at least one gate")
        for g in self.gates:
            if max(g.targets) >= self.N:
                raise ValueError(f"gate {g.name} on {g.targets} out of range for N={self.N}")
        if self.T < self.N:
            log.warning("circuit has T=%d < N=%d; constructions remain well-defined", self.T, self.N)

    @property
    def T(self) -> int:
        return len(self.gates)


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.size != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} amplitudes for n={self.n}, got {amps.size}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1) > NORM_TOL:
            raise ValueError(f"state not normalized (|psi|^2 = {norm2!r})")

    @classmethod
    def basis(cls, n: int, index: int) -> StateVector:
        amps = np.zeros(1 << n, dtype=complex)
        amps[index] = 1
        return cls(n, amps)

    @classmethod
    def from_array(cls, amplitudes, normalize: bool = False) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 1 << n:
            raise ValueError(f"length {amps.size} is not a power of two")
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)


def _as_amplitudes(state) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    arr = np.asarray(state, dtype=complex)
    return arr if arr.ndim == 2 else arr.reshape(-1)


# --- parsing -----------------------------------------------------------------

def _statements(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _floats(tokens: list[str], count: int, lineno: int) -> np.ndarray:
    parts = [p for tok in tokens for p in re.split(r",", tok) if p]
    if len(parts) != count:
        raise CircuitParseError(f"line {lineno}: expected {count} numbers, got {len(parts)}")
    try:
        vals = np.array([float(p) for p in parts])
    except ValueError as exc:
        raise CircuitParseError(f"line {lineno}: {exc}") from None
    return vals[0::2] + 1j * vals[1::2]


def _header(stmt, key: str) -> int:
    lineno, toks = stmt
    if len(toks) != 2 or toks[0] != key:
        raise CircuitParseError(f"line {lineno}: expected '{key} <int>'")
    try:
        return int(toks[1])
    except ValueError:
        raise CircuitParseError(f"line {lineno}: bad integer {toks[1]!r}") from None


def parse_circuit(text: str) -> Circuit:
    """Parse the line-oriented circuit format.

    ``qubits N`` and ``proof m`` come first, then one gate per line: a named
    gate (``H 0``, ``CNOT 0 1``) or an explicit ``U1 q <8 floats>`` /
    ``U2 q1 q2 <32 floats>`` with row-major ``re,im`` entries.
    """
    stmts = list(_statements(text))
    if len(stmts) < 2:
        raise CircuitParseError("missing 'qubits' / 'proof' header")
    N = _header(stmts[0], "qubits")
    m = _header(stmts[1], "proof")
    if N < 1:
        raise CircuitParseError("need at least one qubit")
    if not 1 <= m <= N:
        raise CircuitParseError(f"proof size m={m} must satisfy 1 <= m <= N={N}")

    gates = []
    for lineno, toks in stmts[2:]:
        name = toks[0]
        arity = {"U1": 1, "U2": 2}.get(name)
        if arity is None:
            if name not in NAMED_GATES:
                raise CircuitParseError(f"line {lineno}: unknown gate {name!r}")
            arity = NAMED_GATES[name].shape[0].bit_length() - 1
        try:
            targets = [int(t) for t in toks[1:1 + arity]]
        except ValueError:
            raise CircuitParseError(f"line {lineno}: bad qubit index") from None
        if len(targets) != arity:
            raise CircuitParseError(f"line {lineno}: {name} needs {arity} qubit(s)")
        if any(q < 0 or q >= N for q in targets):
            raise CircuitParseError(f"line {lineno}: qubit out of range for N={N}")
        if name in ("U1", "U2"):
            dim = 1 << arity
            matrix = _floats(toks[1 + arity:], 2 * dim * dim, lineno).reshape(dim, dim)
        else:
            if len(toks) != 1 + arity:
                raise CircuitParseError(f"line {lineno}: trailing tokens after {name}")
            matrix = NAMED_GATES[name]
        try:
            gates.append(Gate(name, tuple(targets), matrix))
        except ValueError as exc:
            raise CircuitParseError(f"line {lineno}: {exc}") from None
    if not gates:
        raise CircuitParseError("circuit has no gates (T >= 1 required)")
    return Circuit(N, m, tuple(gates))


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.N}", f"proof {c.m}"]
    for g in c.gates:
        qs = " ".join(map(str, g.targets))
        if g.name in NAMED_GATES and np.array_equal(g.matrix, NAMED_GATES[g.name]):
            lines.append(f"{g.name} {qs}")
        else:
            nums = " ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in g.matrix.reshape(-1))
            lines.append(f"U{g.arity} {qs} {nums}")
    return "\n".join(lines) + "\n"


# --- simulation --------------------------------------------------------------

def initial_state(c: Circuit, proof) -> np.ndarray:
    """``proof ⊗ |0..0>``: proof qubits are the low bits, so it is a zero-pad."""
    amps = _as_amplitudes(proof)
    if amps.shape[0] != 1 << c.m:
        raise ValueError(f"proof has {amps.shape[0]} amplitudes, expected {1 << c.m}")
    out = np.zeros((1 << c.N,) + amps.shape[1:], dtype=complex)
    out[: 1 << c.m] = amps
    return out


def apply_gates(c: Circuit, state: np.ndarray, upto: int | None = None) -> np.ndarray:
    """Apply ``U_upto .. U_1`` (all gates by default) to an N-qubit array."""
    for g in c.gates[:upto]:
        state = apply_local(state, g.matrix, g.targets, c.N)
    return state


def run_circuit(c: Circuit, proof) -> StateVector:
    check_qubits(c.N)
    amps = _as_amplitudes(proof)
    if amps.shape[0] != 1 << c.m:
        raise ValueError(f"proof has {amps.shape[0]} amplitudes, expected {1 << c.m}")
    return StateVector(c.N, apply_gates(c, initial_state(c, amps)))


def acceptance_probability(c: Circuit, proof) -> float:
    out = run_circuit(c, proof).amplitudes
    p = float(np.sum(np.abs(out[1::2]) ** 2))  # odd indices: output qubit 0 is 1
    return min(max(p, 0.0), 1.0)


def acceptance_operator(c: Circuit) -> np.ndarray:
    """The m-qubit operator ``V† P1 V`` with ``V = U (I ⊗ |0..0>)``."""
    check_qubits(c.N, 14)
    V = apply_gates(c, initial_state(c, np.eye(1 << c.m, dtype=complex)))
    acc = V[1::2]
    A = acc.conj().T @ acc
    return (A + A.conj().T) / 2


def optimal_acceptance(c: Circuit) -> tuple[float, StateVector]:
    vals, vecs = np.linalg.eigh(acceptance_operator(c))
    p_max = min(max(float(vals[-1]), 0.0), 1.0)
    proof = vecs[:, -1] / np.linalg.norm(vecs[:, -1])
    return p_max, StateVector(c.m, proof)


def random_circuit(N: int, m: int, T: int, rng: np.random.Generator, explicit: float = 0.25) -> Circuit:
    """Random mix of named gates and Haar-random explicit 1/2-qubit unitaries."""
    from scipy.stats import unitary_group

    one = ["I", "X", "Y", "Z", "H", "S", "TG"]
    two = ["CNOT", "CZ"]
    gates = []
    for _ in range(T):
        arity = 2 if N > 1 and rng.random() < 0.5 else 1
        targets = tuple(int(q) for q in rng.choice(N, size=arity, replace=False))
        if rng.random() < explicit:
            U = unitary_group.rvs(1 << arity, random_state=rng)
            gates.append(Gate(f"U{arity}", targets, U))
        else:
            gates.append(Gate.named(str(rng.choice(two if arity == 2 else one)), *targets))
    return Circuit(N, m, tuple(gates))
