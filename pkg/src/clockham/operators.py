"""Local-operator algebra: Hermitian terms on a few qubits, full-space
assembly, norm and locality audits, normalization and the text interchange
format."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from ._bits import apply_local, check_qubits, rest_indices, spread

HERMITIAN_TOL = 1e-12
DENSE_LIMIT = 13

GROUPS = ("in", "out", "prop", "clock", "sat", "other")


def _hermitian_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0


@dataclass(frozen=True, eq=False)
class LocalTerm:
    """``weight * matrix`` acting on the sorted qubits in ``support``."""

    label: str
    support: tuple[int, ...]
    matrix: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        object.__setattr__(self, "support", support)
        mat = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "weight", float(self.weight))
        if " " in self.label or not self.label:
            raise ValueError(f"bad label {self.label!r}")
        if list(support) != sorted(set(support)):
            raise ValueError(f"support {support} must be sorted without duplicates")
        if support and support[0] < 0:
            raise ValueError("negative qubit index")
        dim = 1 << len(support)
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match support size {len(support)}")
        defect = _hermitian_defect(mat)
        if defect > HERMITIAN_TOL:
            raise ValueError(f"term {self.label} is not Hermitian (defect {defect:.3g})")

    @classmethod
    def on(cls, label: str, qubits: Sequence[int], matrix, weight: float = 1.0) -> LocalTerm:
        """Build a term from a matrix given on ``qubits`` in any order."""
        support, mat = sort_support(matrix, qubits)
        return cls(label, support, mat, weight)

    @property
    def group(self) -> str:
        return self.label.split(":", 1)[0]

    @property
    def k(self) -> int:
        return len(self.support)


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    n: int
    terms: tuple[LocalTerm, ...] = field(default=())
    thresholds: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for t in self.terms:
            if t.support and t.support[-1] >= self.n:
                raise ValueError(f"term {t.label} touches qubit {t.support[-1]} >= n={self.n}")
        if self.thresholds is not None:
            a, b = self.thresholds
            if not b - a > 0:
                raise ValueError(f"thresholds need b > a, got ({a}, {b})")

    @property
    def r(self) -> int:
        return len(self.terms)

    def select(self, *groups: str) -> LocalHamiltonian:
        return LocalHamiltonian(self.n, [t for t in self.terms if t.group in groups])

    def __add__(self, other: LocalHamiltonian) -> LocalHamiltonian:
        return LocalHamiltonian(max(self.n, other.n), self.terms + other.terms)


def sort_support(matrix, qubits: Sequence[int]) -> tuple[tuple[int, ...], np.ndarray]:
    """Re-express a matrix on ``qubits`` in the ascending order of those qubits."""
    qubits = [int(q) for q in qubits]
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubit in {qubits}")
    support = tuple(sorted(qubits))
    positions = [support.index(q) for q in qubits]
    return support, embed_matrix(matrix, positions, len(qubits), sparse=False)


def embed_matrix(matrix, support: Sequence[int], n: int, sparse: bool = True):
    """Full 2^n operator acting as ``matrix`` on ``support`` and identity elsewhere."""
    check_qubits(n)
    M = np.asarray(matrix, dtype=complex)
    k = len(support)
    if M.shape != (1 << k, 1 << k):
        raise ValueError(f"matrix shape {M.shape} does not match {k} qubits")
    if any(q < 0 or q >= n for q in support):
        raise ValueError(f"support {tuple(support)} out of range for n={n}")
    rest = rest_indices(support, n)
    a, b = np.nonzero(M)
    rows = (rest[None, :] | spread(a, support)[:, None]).ravel()
    cols = (rest[None, :] | spread(b, support)[:, None]).ravel()
    data = np.repeat(M[a, b], rest.size)
    dim = 1 << n
    op = sp.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    return op if sparse else op.toarray()


def embed(term: LocalTerm, n: int, sparse: bool = True):
    return embed_matrix(term.weight * term.matrix, term.support, n, sparse=sparse)


def assemble(H: LocalHamiltonian, sparse: bool | None = None):
    """Sum of embedded terms, in list order. Dense up to 13 qubits by default."""
    check_qubits(H.n)
    if sparse is None:
        sparse = H.n > DENSE_LIMIT
    dim = 1 << H.n
    total = sp.csr_matrix((dim, dim), dtype=complex)
    for t in H.terms:
        total = total + embed(t, H.n)
    return total if sparse else total.toarray()


def as_linear_operator(H: LocalHamiltonian) -> LinearOperator:
    """Matrix-free ``H @ v``, for instances too large to materialize."""
    check_qubits(H.n)
    dim = 1 << H.n

    def matvec(v):
        v = np.asarray(v, dtype=complex).reshape(dim, -1)
        out = np.zeros_like(v)
        for t in H.terms:
            out += t.weight * apply_local(v, t.matrix, t.support, H.n)
        return out

    return LinearOperator((dim, dim), matvec=matvec, matmat=matvec, rmatvec=matvec, dtype=complex)


def locality(H: LocalHamiltonian) -> int:
    return max((t.k for t in H.terms), default=0)


def term_norm(term: LocalTerm) -> float:
    vals = np.linalg.eigvalsh(term.matrix)
    return abs(term.weight) * float(np.max(np.abs(vals)))


def norm_bound(H: LocalHamiltonian) -> float:
    """Triangle-inequality bound ``sum_j ||H_j||``."""
    return sum(term_norm(t) for t in H.terms)


def normalize_terms(H: LocalHamiltonian, a: float | None = None, b: float | None = None):
    """Rescale so every term satisfies ``0 <= H_j <= 1`` and shift thresholds.

    Each term becomes ``s * H_j + I/2`` with ``s = 1 / (2 max_j ||H_j||)``; the
    thresholds map to ``s*a + r/2`` and ``s*b + r/2``.
    """
    if a is None or b is None:
        if H.thresholds is None:
            raise ValueError("thresholds (a, b) are required")
        a, b = H.thresholds
    biggest = max((term_norm(t) for t in H.terms), default=0.0)
    if biggest == 0:
        raise ValueError("cannot normalize the zero Hamiltonian")
    s = 1 / (2 * biggest)
    terms = [
        replace(t, matrix=s * t.weight * t.matrix + 0.5 * np.eye(t.matrix.shape[0]), weight=1.0)
        for t in H.terms
    ]
    a2 = s * a + H.r / 2
    b2 = s * b + H.r / 2
    return LocalHamiltonian(H.n, terms, (a2, b2)), a2, b2


# --- interchange format ------------------------------------------------------

def fmt(x: float) -> str:
    return f"{x:.15g}"


def _fmt_row(row: Iterable[complex]) -> str:
    return " ".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row)


def dumps_hamiltonian(H: LocalHamiltonian) -> str:
    lines = [f"n {H.n}"]
    if H.thresholds is not None:
        lines.append(f"thresholds {fmt(H.thresholds[0])} {fmt(H.thresholds[1])}")
    lines.append(f"terms {H.r}")
    for t in H.terms:
        lines.append(f"{t.label} k {t.k} q {' '.join(map(str, t.support))} w {fmt(t.weight)}".replace("  ", " "))
        lines.extend(_fmt_row(row) for row in t.matrix)
    return "\n".join(lines) + "\n"


def dumps_dense(M) -> str:
    M = M.toarray() if sp.issparse(M) else np.asarray(M)
    lines = [f"dense {M.shape[0]}"]
    lines.extend(_fmt_row(row) for row in M)
    return "\n".join(lines) + "\n"


class FormatError(ValueError):
    pass


def _parse_row(line: str, width: int) -> np.ndarray:
    pairs = line.split()
    if len(pairs) != width:
        raise FormatError(f"expected {width} entries, got {len(pairs)}: {line!r}")
    out = np.empty(width, dtype=complex)
    for i, p in enumerate(pairs):
        re_, _, im = p.partition(",")
        try:
            out[i] = complex(float(re_), float(im) if im else 0.0)
        except ValueError:
            raise FormatError(f"bad complex entry {p!r}") from None
    return out


def loads(text: str):
    """Parse either a term-list Hamiltonian or a ``dense`` matrix dump."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FormatError("empty input")
    head = lines[0].split()
    if head[0] == "dense":
        d = int(head[1])
        if len(lines) != d + 1:
            raise FormatError(f"dense dump: expected {d} rows, got {len(lines) - 1}")
        return np.array([_parse_row(ln, d) for ln in lines[1:]])
    return loads_hamiltonian(text)


def loads_hamiltonian(text: str) -> LocalHamiltonian:
    lines = iter([ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")])
    try:
        key, n = next(lines).split()
        if key != "n":
            raise FormatError("expected 'n <n>' header")
        n = int(n)
        toks = next(lines).split()
        thresholds = None
        if toks[0] == "thresholds":
            thresholds = (float(toks[1]), float(toks[2]))
            toks = next(lines).split()
        if toks[0] != "terms":
            raise FormatError("expected 'terms <r>' header")
        r = int(toks[1])
        terms = []
        for _ in range(r):
            head = next(lines).split()
            label = head[0]
            if head[1] != "k" or head[3] != "q":
                raise FormatError(f"bad term header {' '.join(head)!r}")
            k = int(head[2])
            support = [int(q) for q in head[4:4 + k]]
            if head[4 + k] != "w":
                raise FormatError(f"bad term header {' '.join(head)!r}")
            weight = float(head[5 + k])
            dim = 1 << k
            matrix = np.array([_parse_row(next(lines), dim) for _ in range(dim)])
            terms.append(LocalTerm(label, tuple(support), matrix, weight))
    except StopIteration:
        raise FormatError("truncated Hamiltonian file") from None
    except (IndexError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc)) from None
    if next(lines, None) is not None:
        raise FormatError("trailing content after the last term")
    return LocalHamiltonian(n, terms, thresholds)
