"""Dynamical quantum Zeno effect for belief-action entanglement models."""
from .engine import (
    CurveSample,
    ExperimentSpec,
    Interaction,
    Mode,
    Phase,
    Regime,
    ZenoResult,
    curve_sweep,
    entanglement_at_interaction,
    evolve_single_interaction,
    prob_innocent_free,
    prob_innocent_with_interaction,
    projective_baseline,
    regime_classify,
    transition_rate_analytic,
    transition_rate_numeric,
    zeno_sequence,
)
from .errors import NumericalError, SizingError, ValidationError, ZenoError
from .model import (
    EvidenceSchedule,
    ModelParams,
    ancilla_states_closed_form,
    angular_displacement,
    h_alpha,
    h_beta,
    h_total,
    overlap_re,
    u_free,
)

__version__ = "0.1.0"
