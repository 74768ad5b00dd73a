import functools

import numpy as np
import pytest
from hypothesis import strategies as st

from clockham.circuit import parse_circuit, random_circuit

# p_acc = 1 on some proof
ACCEPTING = {
    "x": "qubits 1\nproof 1\nX 0\n",
    "xxx": "qubits 1\nproof 1\nX 0\nX 0\nX 0\n",
    "bell": "qubits 2\nproof 1\nX 0\nCNOT 0 1\nH 1\nCZ 0 1\n",
    "id2": "qubits 2\nproof 2\nI 0\nH 1\nCZ 0 1\nH 1\n",
    "three": "qubits 3\nproof 2\nX 0\nCNOT 0 2\nH 1\nS 2\n",
}

# an ancilla is swapped into the output qubit, so p_max = 0
REJECTING = {
    "swap2": "qubits 2\nproof 1\nCNOT 0 1\nCNOT 1 0\n",
    "swap3": "qubits 2\nproof 1\nCNOT 0 1\nCNOT 1 0\nCNOT 0 1\n",
    "swap3h": "qubits 2\nproof 1\nCNOT 0 1\nCNOT 1 0\nH 1\n",
    "swap4": "qubits 2\nproof 1\nCNOT 0 1\nCNOT 1 0\nH 1\nS 1\n",
    "wide4": "qubits 3\nproof 2\nCNOT 0 2\nCNOT 2 0\nH 1\nCZ 1 2\n",
}


@functools.lru_cache(maxsize=None)
def circuit(name: str):
    return parse_circuit({**ACCEPTING, **REJECTING}[name])


@pytest.fixture(params=sorted(ACCEPTING))
def accepting(request):
    return circuit(request.param)


@pytest.fixture(params=sorted(REJECTING))
def rejecting(request):
    return circuit(request.param)


def random_proof(m: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(1 << m) + 1j * rng.standard_normal(1 << m)
    return v / np.linalg.norm(v)


@st.composite
def circuits(draw, max_N=3, max_T=4, min_T=1):
    N = draw(st.integers(1, max_N))
    m = draw(st.integers(1, N))
    T = draw(st.integers(min_T, max_T))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_circuit(N, m, T, np.random.default_rng(seed))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
