"""Spectral engine: smallest eigenvalue, Rayleigh quotients, null spaces and
principal angles."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from ._bits import DimensionError
from .operators import LocalHamiltonian, as_linear_operator, assemble

DENSE_MAX_DIM = 1 << 13
NULL_TOL = 1e-8
# heavy diagonal must beat the light block's Gershgorin radius by this factor
GRADING_RATIO = 1e4


class SpectralError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralResult:
    lambda_min: float
    residual: float
    method: Literal["dense", "iterative"]
    iterations: int
    vector: np.ndarray | None = None


def _operator(op):
    if isinstance(op, LocalHamiltonian):
        return assemble(op) if op.n <= 13 else as_linear_operator(op)
    return op


def _dense(op) -> np.ndarray:
    if isinstance(op, LinearOperator):
        raise DimensionError("dense routine needs an explicit matrix")
    if sp.issparse(op):
        if op.shape[0] > DENSE_MAX_DIM:
            raise DimensionError(f"dimension {op.shape[0]} exceeds dense limit {DENSE_MAX_DIM}")
        return op.toarray()
    return np.asarray(op)


def check_hermitian(M, tol: float = 1e-12) -> None:
    if isinstance(M, LinearOperator):
        return
    if sp.issparse(M):
        diff = abs(M - M.conj().T)
        defect = diff.max() if diff.nnz else 0.0
        scale = abs(M).max() if M.nnz else 0.0
    else:
        defect = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
        scale = np.max(np.abs(M)) if M.size else 0.0
    if defect > tol * max(1.0, scale):
        raise ValueError(f"operator is not Hermitian (defect {defect:.3g})")


def _graded_split(M: np.ndarray):
    """Find light/heavy index sets with a dominant heavy diagonal, if any."""
    diag = M.diagonal().real
    radius = np.abs(M).sum(axis=1) - np.abs(diag)
    order = np.argsort(diag)
    sorted_diag = diag[order]
    # candidate cut points: large jumps in the sorted diagonal
    jumps = np.nonzero(sorted_diag[1:] > 10 * np.maximum(np.abs(sorted_diag[:-1]), 1.0))[0] + 1
    for cut in jumps:
        light, heavy = order[:cut], order[cut:]
        scale = max(1.0, float(np.max(np.abs(diag[light]) + radius[light])))
        if np.min(diag[heavy] - radius[heavy]) >= GRADING_RATIO * scale:
            return np.sort(light), np.sort(heavy)
    return None


def _schur_min(M: np.ndarray, light: np.ndarray, heavy: np.ndarray, maxiter: int = 50):
    """Smallest eigenpair via ``lambda = lambda_min(A - B (C - lambda)^-1 B†)``.

    The heavy block ``C`` is strictly diagonally dominant, so solves with it
    are accurate to relative precision and the small eigenvalue is not
    swamped by the large norm of ``M``.
    """
    A = M[np.ix_(light, light)]
    B = M[np.ix_(light, heavy)]
    C = M[np.ix_(heavy, heavy)]
    lam = float(np.linalg.eigvalsh(A)[0])
    for it in range(1, maxiter + 1):
        X = np.linalg.solve(C - lam * np.eye(len(heavy)), B.conj().T)
        S = A - B @ X
        S = (S + S.conj().T) / 2
        vals, vecs = np.linalg.eigh(S)
        new = float(vals[0])
        if abs(new - lam) <= 1e-16 * max(1.0, abs(new)):
            lam = new
            break
        lam = new
    u = vecs[:, 0]
    v = np.zeros(M.shape[0], dtype=complex)
    v[light] = u
    v[heavy] = -X @ u
    return lam, v / np.linalg.norm(v), it


def _residual(op, lam: float, v: np.ndarray) -> float:
    return float(np.linalg.norm(op @ v - lam * v))


def min_eigenvalue(op, tol: float = 1e-10, method: str = "auto", seed: int = 0, maxiter: int | None = None) -> SpectralResult:
    """Smallest eigenvalue of a Hermitian operator.

    Dense eigendecomposition up to ``2**13`` dimensions (refined through a
    Schur complement when the diagonal carries a dominant penalty block);
    ARPACK Lanczos with a seeded start vector above that, or on request.
    """
    op = _operator(op)
    dim = op.shape[0]
    if method == "auto":
        method = "dense" if dim <= DENSE_MAX_DIM and not isinstance(op, LinearOperator) else "iterative"
    check_hermitian(op)
    if dim == 0:
        raise ValueError("empty operator")

    if method == "dense":
        M = _dense(op)
        split = _graded_split(M) if dim > 1 else None
        if split is not None:
            lam, v, its = _schur_min(M, *split)
        else:
            vals, vecs = np.linalg.eigh(M)
            lam, v, its = float(vals[0]), vecs[:, 0], 1
        return SpectralResult(lam, _residual(M, lam, v), "dense", its, v)

    if method != "iterative":
        raise ValueError(f"unknown method {method!r}")
    if dim <= 2:
        return min_eigenvalue(_dense(op), tol, "dense")
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    maxiter = maxiter or 100 * dim
    try:
        vals, vecs = eigsh(op, k=1, which="SA", v0=v0, tol=tol, maxiter=maxiter)
    except ArpackNoConvergence as exc:
        raise SpectralError(f"Lanczos did not converge within {maxiter} iterations") from exc
    lam, v = float(vals[0]), vecs[:, 0]
    return SpectralResult(lam, _residual(op, lam, v), "iterative", maxiter, v)


def rayleigh(op, state) -> float:
    op = _operator(op)
    v = getattr(state, "amplitudes", state)
    v = np.asarray(v, dtype=complex).reshape(-1)
    norm2 = np.vdot(v, v).real
    if norm2 == 0:
        raise ValueError("Rayleigh quotient of the zero vector")
    return float(np.vdot(v, op @ v).real / norm2)


def nullspace_basis(op, tol: float = NULL_TOL) -> np.ndarray:
    """Orthonormal columns spanning the eigenvectors with eigenvalue <= tol."""
    M = _dense(_operator(op))
    if M.shape[0] > DENSE_MAX_DIM:
        raise DimensionError(f"dimension {M.shape[0]} exceeds dense limit {DENSE_MAX_DIM}")
    check_hermitian(M)
    vals, vecs = np.linalg.eigh(M)
    return vecs[:, vals <= tol]


def principal_angle(A: np.ndarray, B: np.ndarray) -> float:
    """cos of the smallest principal angle between two column spans."""
    if A.shape[1] == 0 or B.shape[1] == 0:
        raise ValueError("empty basis")
    s = np.linalg.svd(A.conj().T @ B, compute_uv=False)
    return float(min(max(s[0], 0.0), 1.0))
