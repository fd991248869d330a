"""Small dense complex linear algebra for few-qubit states.

Matrices and state vectors are plain ``numpy`` complex arrays. Everything here
is a pure function; nothing mutates its arguments.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import NumericalError, SizingError, ValidationError

HERMITIAN_TOL = 1e-9
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
ENTROPY_EIG_FLOOR = 1e-12
MAX_DIM = 2**21

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def is_unitary(a, tol: float = UNITARY_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    err = a.conj().T @ a - np.eye(a.shape[0])
    return bool(np.max(np.abs(err), initial=0.0) <= tol)


def kron(a, b, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product ``a ⊗ b``; vectors are treated as column vectors.

    Raises SizingError when either dimension of the product exceeds ``max_dim``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValidationError("kron needs two vectors or two matrices")
    shape = tuple(x * y for x, y in zip(a.shape, b.shape))
    if max(shape) > max_dim:
        raise SizingError(f"kron result dimension {max(shape)} exceeds cap {max_dim}")
    return np.kron(a, b)


def matexp_hermitian(h, t: float) -> np.ndarray:
    """Return exp(-i h t) for Hermitian ``h`` via its eigendecomposition."""
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, HERMITIAN_TOL):
        raise ValidationError("matexp_hermitian: generator is not Hermitian")
    h = 0.5 * (h + h.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    if not is_unitary(u, UNITARY_TOL):
        raise NumericalError("matexp_hermitian: result is not unitary within tolerance")
    return u


def density(psi) -> np.ndarray:
    """Projector |psi><psi| of a state vector."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density(rho, tol: float = TRACE_TOL) -> np.ndarray:
    """Check Hermitian, unit trace and non-negative spectrum; return ``rho``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValidationError("density operator must be a square matrix")
    if not is_hermitian(rho, tol):
        raise ValidationError("density operator is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise ValidationError(f"density operator trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -tol:
        raise ValidationError("density operator has a negative eigenvalue")
    return rho


def partial_trace(state, keep: int, dims: Sequence[int]) -> np.ndarray:
    """Reduced density operator of subsystem ``keep``.

    ``state`` may be a state vector or a density matrix over the tensor product
    of factors with dimensions ``dims`` (first factor is most significant).
    """
    state = np.asarray(state, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if not 0 <= keep < len(dims):
        raise ValidationError(f"keep={keep} out of range for {len(dims)} subsystems")
    if state.shape[0] != total:
        raise ValidationError(f"dims {dims} do not match state dimension {state.shape[0]}")
    if state.ndim == 1:
        t = np.moveaxis(state.reshape(dims), keep, 0).reshape(dims[keep], -1)
        return t @ t.conj().T
    if state.ndim != 2 or state.shape != (total, total):
        raise ValidationError("density matrix must be square")
    n = len(dims)
    t = state.reshape(dims + dims)
    # bring kept bra/ket axes to the front, then sum the rest pairwise
    t = np.moveaxis(t, [keep, n + keep], [0, 1])
    rest = total // dims[keep]
    t = t.reshape(dims[keep], dims[keep], rest, rest)
    return np.einsum("ijkk->ij", t)


def von_neumann_entropy(rho) -> float:
    """Entropy -Σ λ ln λ in nats over eigenvalues above the floor."""
    rho = validate_density(rho)
    lam = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    lam = lam[lam > ENTROPY_EIG_FLOOR]
    return float(max(0.0, -np.sum(lam * np.log(lam))))


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of ``rho - sigma``."""
    d = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(0.5 * (d + d.conj().T)))))
