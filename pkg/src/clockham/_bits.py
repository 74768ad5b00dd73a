"""Bit-ordering helpers shared by the simulator and the operator algebra.

Convention: qubit ``q`` is bit ``q`` of a basis-state integer (least
significant first). A local matrix on ``support = (s0, s1, ...)`` uses local
index ``sum_j b(s_j) << j``.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

MAX_QUBITS = 30


class DimensionError(ValueError):
    """Raised when an operator or state would exceed the size guard."""


def check_qubits(n: int, limit: int = MAX_QUBITS) -> None:
    if n > limit:
        raise DimensionError(f"{n} qubits exceeds the guard of {limit}")


def spread(local: np.ndarray, support: Sequence[int]) -> np.ndarray:
    """Map local indices to global bit patterns on ``support``."""
    local = np.asarray(local, dtype=np.int64)
    out = np.zeros_like(local)
    for j, q in enumerate(support):
        out |= ((local >> j) & 1) << q
    return out


def gather(index: np.ndarray, support: Sequence[int]) -> np.ndarray:
    """Inverse of :func:`spread`: read the support bits of global indices."""
    index = np.asarray(index, dtype=np.int64)
    out = np.zeros_like(index)
    for j, q in enumerate(support):
        out |= ((index >> q) & 1) << j
    return out


def rest_indices(support: Sequence[int], n: int) -> np.ndarray:
    """All n-qubit basis indices whose support bits are zero, ascending."""
    others = [q for q in range(n) if q not in set(support)]
    return spread(np.arange(1 << len(others)), others)


def apply_local(state: np.ndarray, matrix: np.ndarray, support: Sequence[int], n: int) -> np.ndarray:
    """Return ``(matrix on support) @ state`` without forming the full operator.

    ``state`` may carry trailing batch columns (shape ``(2**n, b)``).
    """
    k = len(support)
    batch = state.shape[1:]
    psi = state.reshape((2,) * n + batch)
    # numpy axis a holds qubit n-1-a; local tensor axes run from bit k-1 down to 0
    gate = np.asarray(matrix).reshape((2,) * (2 * k))
    in_axes = [n - 1 - support[k - 1 - a] for a in range(k)]
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), in_axes))
    out = np.moveaxis(out, list(range(k)), in_axes)
    return out.reshape(state.shape)
