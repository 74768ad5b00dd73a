import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clockham.circuit import (
    NAMED_GATES,
    Circuit,
    CircuitParseError,
    Gate,
    StateVector,
    acceptance_probability,
    format_circuit,
    optimal_acceptance,
    parse_circuit,
    run_circuit,
)
from clockham.operators import embed_matrix

from conftest import circuit, circuits, random_proof


def kron_unitary(c: Circuit) -> np.ndarray:
    """Full circuit unitary built element by element, independent of the simulator."""
    dim = 1 << c.N
    total = np.eye(dim, dtype=complex)
    for g in c.gates:
        U = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            sub_in = sum(((col >> q) & 1) << j for j, q in enumerate(g.targets))
            base = col
            for q in g.targets:
                base &= ~(1 << q)
            for sub_out in range(1 << g.arity):
                row = base | sum(((sub_out >> j) & 1) << q for j, q in enumerate(g.targets))
                U[row, col] = g.matrix[sub_out, sub_in]
        total = U @ total
    return total


def test_parse_single_gate():
    c = parse_circuit("qubits 1\nproof 1\nX 0\n")
    assert (c.N, c.m, c.T) == (1, 1, 1)
    assert c.gates[0].name == "X" and c.gates[0].targets == (0,)


def test_parse_two_qubit():
    c = parse_circuit("qubits 2\nproof 1\nCNOT 0 1")
    assert (c.N, c.m, c.T) == (2, 1, 1)
    assert c.gates[0].targets == (0, 1)


def test_parse_comments_and_explicit_gates():
    h = float(1 / np.sqrt(2))
    text = f"""# header comment
    qubits 2   # N
    proof 1
    U1 0 {h!r},0 {h!r},0 {h!r},0 {-h!r},0
    U2 0 1 {' '.join(f'{float(z.real)!r},{float(z.imag)!r}' for z in NAMED_GATES['CNOT'].ravel())}
    """
    c = parse_circuit(text)
    assert c.T == 2
    np.testing.assert_allclose(c.gates[0].matrix, NAMED_GATES["H"], atol=1e-15)
    np.testing.assert_array_equal(c.gates[1].matrix, NAMED_GATES["CNOT"])


def test_explicit_gate_accepts_whitespace_separated_floats():
    c = parse_circuit("qubits 1\nproof 1\nU1 0 0 0 1 0 1 0 0 0\n")
    np.testing.assert_array_equal(c.gates[0].matrix, NAMED_GATES["X"])


@pytest.mark.parametrize(
    "text, match",
    [
        ("qubits 1\nproof 1\nU1 0 1,0 1,0 0,0 1,0\n", "not unitary"),
        ("qubits 1\nproof 1\nU1 0 0.7071,0 0.7071,0 0.7071,0 -0.7071,0\n", "not unitary"),
        ("qubits 1\nproof 2\nX 0\n", "m=2"),
        ("qubits 2\nproof 1\nCNOT 0 2\n", "out of range"),
        ("qubits 2\nproof 1\nCNOT 0 0\n", "distinct"),
        ("qubits 1\nproof 1\nFOO 0\n", "unknown gate"),
        ("qubits 1\nproof 1\nX\n", "needs 1"),
        ("qubits 1\nproof 1\nX 0 0\n", "trailing"),
        ("qubits one\nproof 1\nX 0\n", "bad integer"),
        ("proof 1\nqubits 1\nX 0\n", "qubits"),
        ("qubits 1\nproof 1\n", "no gates"),
        ("qubits 1\nproof 1\nU1 0 1,0 0,0\n", "expected 8"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(CircuitParseError, match=match):
        parse_circuit(text)


def test_format_roundtrip():
    rng = np.random.default_rng(3)
    from clockham.circuit import random_circuit

    c = random_circuit(3, 2, 6, rng, explicit=0.5)
    c2 = parse_circuit(format_circuit(c))
    assert [g.targets for g in c2.gates] == [g.targets for g in c.gates]
    for g, g2 in zip(c.gates, c2.gates):
        np.testing.assert_array_equal(g.matrix, g2.matrix)


def test_gate_and_state_validation():
    with pytest.raises(ValueError, match="not unitary"):
        Gate("bad", (0,), np.diag([1, 2]))
    with pytest.raises(ValueError, match="shape"):
        Gate("bad", (0, 1), np.eye(2))
    with pytest.raises(ValueError, match="normalized"):
        StateVector(1, [1, 1])
    with pytest.raises(ValueError, match="at least one gate"):
        Circuit(1, 1, ())


def test_cnot_convention_first_target_controls():
    c = parse_circuit("qubits 2\nproof 1\nCNOT 0 1\n")
    # proof |1> on qubit 0: |q0=1, q1=0> (index 1) -> |11> (index 3)
    out = run_circuit(c, [0, 1]).amplitudes
    np.testing.assert_allclose(out, [0, 0, 0, 1])


@pytest.mark.parametrize(
    "text, proof, expected",
    [
        ("qubits 1\nproof 1\nX 0\n", [1, 0], [0, 1]),
        ("qubits 1\nproof 1\nX 0\nX 0\n", [1, 0], [1, 0]),
        ("qubits 2\nproof 1\nCNOT 0 1\n", [0, 1], [0, 0, 0, 1]),
    ],
)
def test_run_circuit_examples(text, proof, expected):
    out = run_circuit(parse_circuit(text), proof)
    assert out.n == len(expected).bit_length() - 1
    np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)


def test_run_circuit_dimension_mismatch():
    with pytest.raises(ValueError, match="amplitudes"):
        run_circuit(parse_circuit("qubits 2\nproof 1\nX 0\n"), [1, 0, 0, 0])


@pytest.mark.parametrize(
    "text, p",
    [
        ("qubits 1\nproof 1\nX 0\n", 1.0),
        ("qubits 1\nproof 1\nX 0\nX 0\n", 0.0),
        ("qubits 1\nproof 1\nH 0\n", 0.5),
    ],
)
def test_acceptance_probability_examples(text, p):
    assert acceptance_probability(parse_circuit(text), [1, 0]) == pytest.approx(p, abs=1e-15)


def dense_optimal_acceptance(c: Circuit) -> float:
    """Oracle: largest eigenvalue of A built from the element-wise unitary."""
    U = kron_unitary(c)
    V = U[:, : 1 << c.m]  # proof ⊗ |0..0> are the first 2^m basis states
    P1 = np.diag([(x & 1) for x in range(1 << c.N)])
    A = V.conj().T @ P1 @ V
    return float(np.linalg.eigvalsh(A)[-1])


def test_optimal_acceptance_examples():
    p, proof = optimal_acceptance(parse_circuit("qubits 1\nproof 1\nX 0\n"))
    assert p == pytest.approx(1.0)

    single_identity = parse_circuit("qubits 1\nproof 1\nI 0\n")
    p, proof = optimal_acceptance(single_identity)
    assert p == pytest.approx(dense_optimal_acceptance(single_identity)) == pytest.approx(1.0)
    assert abs(proof.amplitudes[1]) == pytest.approx(1.0)

    for name in ("swap2", "swap3", "swap4", "wide4"):
        assert optimal_acceptance(circuit(name))[0] == pytest.approx(0.0, abs=1e-15)


def test_identity_with_output_as_proof_qubit_accepts():
    # qubit 0 is always a proof qubit, so an identity circuit accepts |1>
    c = parse_circuit("qubits 2\nproof 1\nI 0\nI 1\n")
    assert acceptance_probability(c, [1, 0]) == 0.0
    assert optimal_acceptance(c)[0] == pytest.approx(1.0)


@settings(max_examples=40, deadline=None)
@given(circuits(max_N=4, max_T=6), st.integers(0, 2**32 - 1))
def test_unitarity_preserved(c, seed):
    out = run_circuit(c, random_proof(c.m, np.random.default_rng(seed)))
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(circuits(max_N=4, max_T=6))
def test_optimal_acceptance_matches_oracle_and_dominates(c):
    p_max, proof = optimal_acceptance(c)
    assert p_max == pytest.approx(dense_optimal_acceptance(c), abs=1e-10)
    assert abs(acceptance_probability(c, proof) - p_max) <= 1e-10
    rng = np.random.default_rng(c.T * 7919 + c.N)
    for _ in range(100):
        assert acceptance_probability(c, random_proof(c.m, rng)) <= p_max + 1e-10


@settings(max_examples=40, deadline=None)
@given(circuits(max_N=4, max_T=6), st.integers(0, 2**32 - 1))
def test_composition_matches_embedded_product(c, seed):
    proof = random_proof(c.m, np.random.default_rng(seed))
    full = np.eye(1 << c.N, dtype=complex)
    for g in c.gates:
        full = embed_matrix(g.matrix, g.targets, c.N, sparse=False) @ full
    expected = full[:, : 1 << c.m] @ proof
    assert np.max(np.abs(run_circuit(c, proof).amplitudes - expected)) <= 1e-12
    assert np.max(np.abs(full - kron_unitary(c))) <= 1e-12


def test_short_circuit_warns(caplog):
    parse_circuit("qubits 3\nproof 1\nX 0\n")
    assert "T=1 < N=3" in caplog.text
