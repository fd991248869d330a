"""Experiments on the belief qubit: single interaction, rates, Zeno sequences.

Every routine takes an :class:`ExperimentSpec` (or plain scalars) and is a
pure function of it.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import qlin
from .errors import NumericalError, SizingError, ValidationError
from .model import (
    ModelParams,
    check_generator,
    h_alpha,
    h_alpha_as_printed,
    h_beta,
    u_free,
)

NORM_TOL = 1e-10
REGIME_BAND = 1e-9
MIN_FD_STEP = 1e-12
DEFAULT_MAX_QUBITS = 21

# belief-controlled flip of a fresh ancilla: orthogonal pointers, overlap 0
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
PROJ0 = np.array([[1, 0], [0, 0]], dtype=complex)


class Mode(str, Enum):
    PURE_STATE = "pure_state"
    CHANNEL = "channel"


class Interaction(str, Enum):
    BAE = "bae"
    DEPHASING = "dephasing"


class Phase(str, Enum):
    PRE = "pre"
    BOUNDARY = "boundary"
    POST = "post"


class Regime(str, Enum):
    NO_EFFECT = "no_effect"
    PARTIAL_ZENO = "partial_zeno"
    FROZEN = "frozen"
    ENHANCEMENT = "enhancement"


@dataclass(frozen=True)
class ExperimentSpec:
    params: ModelParams = field(default_factory=ModelParams)
    b_first: float = 0.2
    b_total: float = 0.6
    grid_points: int = 400
    n_interactions: int = 1
    mode: Mode = Mode.CHANNEL
    interaction: Interaction = Interaction.BAE
    # explicit per-leg rotations (n_interactions + 1 entries) for zeno_sequence
    angles: Optional[tuple[float, ...]] = None
    # per-interaction overrides of params for zeno_sequence
    step_params: Optional[tuple[ModelParams, ...]] = None
    # "printed" injects the literal asymmetric utility generator (diagnostics)
    h_alpha_form: str = "symmetric"

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "interaction", Interaction(self.interaction))
        if not (math.isfinite(self.b_first) and math.isfinite(self.b_total)):
            raise ValidationError("b_first and b_total must be finite")
        if not 0 <= self.b_first <= self.b_total:
            raise ValidationError("need 0 <= b_first <= b_total")
        if self.grid_points < 2:
            raise ValidationError("grid_points must be >= 2")
        if self.n_interactions < 0:
            raise ValidationError("n_interactions must be >= 0")
        if self.h_alpha_form not in ("symmetric", "printed"):
            raise ValidationError("h_alpha_form must be 'symmetric' or 'printed'")
        if self.angles is not None:
            object.__setattr__(self, "angles", tuple(float(a) for a in self.angles))
            if len(self.angles) != self.n_interactions + 1:
                raise ValidationError("angles needs n_interactions + 1 entries")
        if self.step_params is not None:
            object.__setattr__(self, "step_params", tuple(self.step_params))
            if len(self.step_params) != self.n_interactions:
                raise ValidationError("step_params needs n_interactions entries")


@dataclass(frozen=True)
class CurveSample:
    b: float
    p_free: float
    p_interaction: float
    phase: Phase


@dataclass
class ZenoResult:
    n: int
    survival: float
    entropy_trace: list[float]
    mode: Mode
    rho_belief: np.ndarray

    @property
    def entropy_mean(self) -> float:
        return float(np.mean(self.entropy_trace)) if self.entropy_trace else 0.0


def interaction_unitary(spec: ExperimentSpec, params: ModelParams | None = None) -> np.ndarray:
    """Two-qubit propagator for one belief-intention evaluation."""
    if spec.interaction is Interaction.DEPHASING:
        return CNOT.copy()
    p = spec.params if params is None else params
    ha = h_alpha_as_printed if spec.h_alpha_form == "printed" else h_alpha
    h = check_generator(ha(p.mu0, p.mu1) + h_beta(p.gamma))
    return qlin.matexp_hermitian(h, p.t_prime)


def _check_norm(psi: np.ndarray, where: str) -> None:
    drift = abs(np.vdot(psi, psi).real - 1.0)
    if drift > NORM_TOL:
        raise NumericalError(f"normalization drift {drift:.3g} {where}")


def _rotate_belief(b: float, psi: np.ndarray) -> np.ndarray:
    """Apply U_b(b) ⊗ I to a state whose leading factor is the belief qubit."""
    return (u_free(b) @ psi.reshape(2, -1)).reshape(psi.shape)


def state_after_interaction(spec: ExperimentSpec) -> np.ndarray:
    """Joint 4-vector right after the single interaction at b_first."""
    psi = qlin.kron(qlin.KET0, qlin.KET0)
    psi = _rotate_belief(spec.b_first, psi)
    psi = interaction_unitary(spec) @ psi
    _check_norm(psi, "after interaction")
    return psi


def evolve_single_interaction(spec: ExperimentSpec) -> np.ndarray:
    """Full three-leg evolution of |0_b,0_a> ending at b_total."""
    if spec.n_interactions != 1:
        raise ValidationError("evolve_single_interaction needs n_interactions == 1")
    psi = _rotate_belief(spec.b_total - spec.b_first, state_after_interaction(spec))
    _check_norm(psi, "after final rotation")
    return psi


def belief_survival(psi: np.ndarray) -> float:
    """<psi| (|0_b><0_b| ⊗ I) |psi> for a belief-first joint state."""
    half = psi.reshape(2, -1)[0]
    return float(np.vdot(half, half).real)


def prob_innocent_free(b_total: float) -> float:
    return math.cos(b_total) ** 2


def prob_innocent_free_split(b_first: float, b_second: float) -> float:
    """Two-leg free survival written out with its interference term."""
    c1, s1 = math.cos(b_first), math.sin(b_first)
    c2, s2 = math.cos(b_second), math.sin(b_second)
    return c1 * c1 * c2 * c2 + s1 * s1 * s2 * s2 - 2 * c1 * c2 * s1 * s2


def prob_innocent_closed_form(b_first: float, b_second: float, overlap: float) -> float:
    """Survival after one gamma = 0 interaction, given Re <nu|eta>."""
    c1, s1 = math.cos(b_first), math.sin(b_first)
    c2, s2 = math.cos(b_second), math.sin(b_second)
    return c1 * c1 * c2 * c2 + s1 * s1 * s2 * s2 - 2 * c1 * c2 * s1 * s2 * overlap


def prob_innocent_with_interaction(spec: ExperimentSpec) -> float:
    return belief_survival(evolve_single_interaction(spec))


def transition_rate_analytic(b_first: float, overlap: float) -> float:
    if not -1 - REGIME_BAND <= overlap <= 1 + REGIME_BAND:
        raise ValidationError(f"overlap {overlap} outside [-1, 1]")
    return -2 * math.cos(b_first) * math.sin(b_first) * overlap


def transition_rate_numeric(spec: ExperimentSpec, h: float = 1e-5, at: float = 0.0) -> float:
    """d survival / d B_{1,2} at B_{1,2} = ``at``, by finite differences.

    ``at == 0`` is the one-sided limit just after the interaction and uses the
    second-order forward stencil; interior points use a central difference.
    With ``n_interactions == 0`` the free evolution is differentiated instead.
    """
    if not h >= MIN_FD_STEP:
        raise ValidationError(f"finite-difference step {h} below {MIN_FD_STEP}")
    if at < 0:
        raise ValidationError("rate offset must be >= 0")
    if spec.n_interactions == 0:
        def f(x):
            return prob_innocent_free(spec.b_first + x)
    elif spec.n_interactions == 1:
        psi = state_after_interaction(spec)

        def f(x):
            return belief_survival(_rotate_belief(x, psi))
    else:
        raise ValidationError("transition rates are defined for 0 or 1 interactions")
    if at == 0:
        return (-3 * f(0.0) + 4 * f(h) - f(2 * h)) / (2 * h)
    return (f(at + h) - f(at - h)) / (2 * h)


def regime_classify(overlap: float) -> Regime:
    if not -1 - REGIME_BAND <= overlap <= 1 + REGIME_BAND:
        raise ValidationError(f"overlap {overlap} outside [-1, 1]")
    if overlap >= 1 - REGIME_BAND:
        return Regime.NO_EFFECT
    if abs(overlap) <= REGIME_BAND:
        return Regime.FROZEN
    if overlap < 0:
        return Regime.ENHANCEMENT
    return Regime.PARTIAL_ZENO


def max_pure_qubits() -> int:
    raw = os.environ.get("ZENOCTL_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValidationError(f"ZENOCTL_MAX_QUBITS={raw!r} is not an integer") from exc
    if value < 1:
        raise ValidationError("ZENOCTL_MAX_QUBITS must be >= 1")
    return value


def _sequence_plan(spec: ExperimentSpec):
    n = spec.n_interactions
    angles = spec.angles or (spec.b_total / (n + 1),) * (n + 1)
    params = spec.step_params or (spec.params,) * n
    unitaries = [interaction_unitary(spec, p) for p in params]
    return angles, unitaries


def _zeno_pure(spec: ExperimentSpec):
    n = spec.n_interactions
    cap = max_pure_qubits()
    if n + 1 > cap:
        raise SizingError(f"pure_state mode needs {n + 1} qubits, cap is {cap}")
    angles, unitaries = _sequence_plan(spec)
    psi = qlin.KET0.copy()
    entropies = []
    for angle, u in zip(angles[:-1], unitaries):
        psi = _rotate_belief(angle, psi).reshape(2, -1)
        rest = psi.shape[1]
        joint = np.zeros((2, 2, rest), dtype=complex)
        joint[:, 0, :] = psi
        joint = np.einsum("abcd,cdr->abr", u.reshape(2, 2, 2, 2), joint)
        psi = joint.reshape(-1)
        _check_norm(psi, "in pure-state sequence")
        m = psi.reshape(2, -1)
        entropies.append(qlin.von_neumann_entropy(m @ m.conj().T))
    psi = _rotate_belief(angles[-1], psi)
    _check_norm(psi, "in pure-state sequence")
    m = psi.reshape(2, -1)
    return m @ m.conj().T, entropies


def _zeno_channel(spec: ExperimentSpec):
    angles, unitaries = _sequence_plan(spec)
    rho = qlin.density(qlin.KET0)
    entropies = []
    fresh = qlin.density(qlin.KET0)
    for angle, u in zip(angles[:-1], unitaries):
        ub = u_free(angle)
        rho = ub @ rho @ ub.conj().T
        joint = u @ qlin.kron(rho, fresh) @ u.conj().T
        rho = qlin.partial_trace(joint, 0, (2, 2))
        rho = qlin.validate_density(rho)
        entropies.append(qlin.von_neumann_entropy(rho))
    ub = u_free(angles[-1])
    rho = qlin.validate_density(ub @ rho @ ub.conj().T)
    return rho, entropies


def zeno_sequence(spec: ExperimentSpec) -> ZenoResult:
    """Belief survival after n evaluations, each against a fresh |0_a> ancilla.

    The total rotation is split evenly over n + 1 legs unless ``spec.angles``
    is given. ``entropy_trace`` holds the belief entropy after each evaluation.
    """
    if spec.mode is Mode.PURE_STATE:
        rho, entropies = _zeno_pure(spec)
    else:
        try:
            rho, entropies = _zeno_channel(spec)
        except ValidationError as exc:
            raise NumericalError(f"channel state left the density-operator set: {exc}") from exc
    return ZenoResult(
        n=spec.n_interactions,
        survival=float(rho[0, 0].real),
        entropy_trace=entropies,
        mode=spec.mode,
        rho_belief=rho,
    )


def projective_baseline(n: int, b_total: float, post_select: bool = False) -> float:
    """Survival under n projective belief measurements between equal rotations.

    Unread outcomes give the two-state Markov chain; post-selection keeps only
    the all-innocent record.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    theta = b_total / (n + 1)
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    if post_select:
        return c2 ** (n + 1)
    p = 1.0
    for _ in range(n + 1):
        p = p * c2 + (1 - p) * s2
    return p


def curve_sweep(spec: ExperimentSpec) -> list[CurveSample]:
    """Free and single-interaction survival curves on [0, b_total].

    Two samples share B = b_first: the last pre-interaction one and the first
    post-interaction one, so a jump across the interaction stays visible.
    """
    psi = state_after_interaction(spec)
    grid = np.linspace(0.0, spec.b_total, spec.grid_points)
    samples = []
    for b in grid:
        b = float(b)
        if b < spec.b_first:
            p = prob_innocent_free(b)
            samples.append(CurveSample(b, p, p, Phase.PRE))
    p1 = prob_innocent_free(spec.b_first)
    samples.append(CurveSample(spec.b_first, p1, p1, Phase.PRE))
    samples.append(CurveSample(spec.b_first, p1, belief_survival(psi), Phase.BOUNDARY))
    for b in grid:
        b = float(b)
        if b > spec.b_first:
            p_int = belief_survival(_rotate_belief(b - spec.b_first, psi))
            samples.append(CurveSample(b, prob_innocent_free(b), p_int, Phase.POST))
    return samples


def reduced_belief_after_interaction(spec: ExperimentSpec) -> np.ndarray:
    return qlin.partial_trace(state_after_interaction(spec), 0, (2, 2))


def entanglement_at_interaction(spec: ExperimentSpec) -> float:
    """Belief entropy (nats) immediately after the evaluation."""
    return qlin.von_neumann_entropy(reduced_belief_after_interaction(spec))
