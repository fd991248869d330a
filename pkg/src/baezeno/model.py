"""Belief-action entanglement model objects.

Basis ordering for the two-qubit space is ``|k_b, j_a> -> 2*k + j``: the belief
qubit is the most significant factor, so belief-0 amplitudes occupy indices 0
and 1 and belief-1 amplitudes indices 2 and 3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import qlin
from .errors import NumericalError, ValidationError


@dataclass(frozen=True)
class ModelParams:
    mu0: float = 0.0
    mu1: float = 0.0
    gamma: float = 0.0
    t_prime: float = math.pi / 2

    def __post_init__(self):
        for name in ("mu0", "mu1", "gamma", "t_prime"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.t_prime < 0:
            raise ValidationError("t_prime must be >= 0")


@dataclass(frozen=True)
class EvidenceSchedule:
    """Angular displacement schedule driven by per-evidence strengths."""

    alpha: float = 0.2
    beta: float = 0.0
    a: tuple[float, ...] = field(default=(1.0,))

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))


def u_free(b: float) -> np.ndarray:
    """Belief rotation exp(-i σx b) = cos b I - i sin b σx."""
    c, s = math.cos(b), math.sin(b)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def angular_displacement(s: EvidenceSchedule, m: int, n: int) -> float:
    """Rotation accumulated between judgments at evidence indices m and n."""
    if not 0 <= m <= n <= len(s.a):
        raise ValidationError(f"need 0 <= m <= n <= {len(s.a)}, got m={m}, n={n}")
    total = 0.0
    for j in range(m + 1, n + 1):
        total += s.a[j - 1] * math.exp(-s.beta * (j - m - 1) ** 2)
    return s.alpha * total


def _utility_block(mu: float) -> np.ndarray:
    k = 1.0 / math.sqrt(1.0 + mu * mu)
    return np.array([[mu * k, k], [k, -mu * k]], dtype=complex)


def h_alpha(mu0: float, mu1: float) -> np.ndarray:
    """Utility-driven generator: one symmetric 2x2 block per belief value.

    Each block is (1/sqrt(1+mu^2)) [[mu, 1], [1, -mu]] with eigenvalues ±1.
    """
    h = np.zeros((4, 4), dtype=complex)
    h[:2, :2] = _utility_block(mu0)
    h[2:, 2:] = _utility_block(mu1)
    return h


def h_alpha_as_printed(mu0: float, mu1: float) -> np.ndarray:
    """Literal typeset form with the asymmetric (0, 1) entry.

    Diagnostic use only: it is not Hermitian and every constructor that
    consumes a generator rejects it.
    """
    h = h_alpha(mu0, mu1)
    h[0, 1] = mu0 / math.sqrt(1.0 + mu0 * mu0)
    return h


def h_beta(gamma: float) -> np.ndarray:
    """Cognitive-dissonance coupling between belief and intention."""
    c = gamma / math.sqrt(2.0)
    return np.array(
        [
            [-c, 0, -c, 0],
            [0, c, 0, -c],
            [-c, 0, c, 0],
            [0, -c, 0, -c],
        ],
        dtype=complex,
    )


def h_total(p: ModelParams) -> np.ndarray:
    return h_alpha(p.mu0, p.mu1) + h_beta(p.gamma)


def check_generator(h) -> np.ndarray:
    """Reject a non-Hermitian interaction generator with a NumericalError."""
    if not qlin.is_hermitian(h, qlin.HERMITIAN_TOL):
        raise NumericalError("interaction generator is not Hermitian")
    return np.asarray(h, dtype=complex)


def u_interaction(p: ModelParams, h=None) -> np.ndarray:
    """exp(-i H t') for H = h_total(p) unless an explicit generator is given."""
    h = h_total(p) if h is None else check_generator(h)
    return qlin.matexp_hermitian(h, p.t_prime)


def pointer_state(mu: float, t_prime: float) -> np.ndarray:
    """Ancilla state reached from |0_a> under one utility block for time t'."""
    theta = math.atan2(1.0, mu)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    em, ep = np.exp(-1j * t_prime), np.exp(1j * t_prime)
    return np.array([em * c * c + ep * s * s, (em - ep) * c * s], dtype=complex)


def ancilla_states_closed_form(p: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Pointer states (nu_a, eta_a) correlated with belief 0 and belief 1.

    Only valid without the dissonance coupling; for gamma != 0 use the
    numeric propagator from :func:`u_interaction`.
    """
    if p.gamma != 0:
        raise ValidationError(
            "closed-form ancilla states require gamma == 0; use u_interaction for gamma != 0"
        )
    return pointer_state(p.mu0, p.t_prime), pointer_state(p.mu1, p.t_prime)


def ancilla_states_numeric(p: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Same pointers read off exp(-i h_alpha t') acting on |0_b,0_a> and |1_b,0_a>."""
    u = qlin.matexp_hermitian(h_alpha(p.mu0, p.mu1), p.t_prime)
    return u[:2, 0].copy(), u[2:, 2].copy()


def overlap_re(nu, eta) -> float:
    """Re <nu|eta>."""
    nu = np.asarray(nu, dtype=complex)
    eta = np.asarray(eta, dtype=complex)
    if nu.shape != eta.shape:
        raise ValidationError(f"dimension mismatch {nu.shape} vs {eta.shape}")
    return float(np.vdot(nu, eta).real)


def pointer_overlap(p: ModelParams) -> float:
    """Re <nu_a|eta_a> for gamma == 0 parameters."""
    return overlap_re(*ancilla_states_closed_form(p))
