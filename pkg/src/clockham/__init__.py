"""Compile verifier circuits into 3-local Hamiltonians and check the
completeness / soundness inequalities numerically."""

from ._bits import DimensionError
from .circuit import (
    Circuit,
    CircuitParseError,
    Gate,
    StateVector,
    acceptance_probability,
    optimal_acceptance,
    parse_circuit,
    run_circuit,
)
from .operators import LocalHamiltonian, LocalTerm, assemble, embed, locality, normalize_terms, term_norm
from .reduction import (
    ClockState,
    ReductionParams,
    build_3local,
    build_reference,
    compress_legal,
    decompose_legal,
    history_state,
    legal_projector,
    sat_to_hamiltonian,
)
from .spectra import SpectralResult, min_eigenvalue, nullspace_basis, principal_angle, rayleigh
from .verify import (
    VerificationReport,
    angle_diagnostic,
    clock_penalty_audit,
    decide,
    energy_identity_check,
    verify_completeness,
    verify_soundness,
)

__version__ = "0.1.0"
