import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from baezeno import qlin
from baezeno.errors import NumericalError, ValidationError
from baezeno.model import (
    EvidenceSchedule,
    ModelParams,
    ancilla_states_closed_form,
    ancilla_states_numeric,
    angular_displacement,
    check_generator,
    h_alpha,
    h_alpha_as_printed,
    h_beta,
    h_total,
    overlap_re,
    pointer_overlap,
    u_free,
    u_interaction,
)
from conftest import FIG1, FIG2

MU_GRID = [0.0, 0.3, 0.6, 1.4, 5.0]
T_GRID = [0.0, math.pi / 4, math.pi / 2, 1.0, math.pi]
FIG1_OVERLAP = 0.96916853109362233  # scipy expm on the 4x4 generator


def test_u_free_identity():
    assert np.array_equal(u_free(0.0), np.eye(2))


def test_u_free_first_leg_fig1():
    psi = u_free(0.2) @ [1, 0]
    assert np.allclose(psi, [math.cos(0.2), -1j * math.sin(0.2)], atol=1e-16)


def test_u_free_quarter_flip():
    assert np.allclose(u_free(math.pi / 2) @ [1, 0], [0, -1j], atol=1e-16)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_u_free_additive(b1, b2):
    assert np.max(np.abs(u_free(b1) @ u_free(b2) - u_free(b1 + b2))) < 1e-12


def test_angular_displacement_empty():
    assert angular_displacement(EvidenceSchedule(1.0, 0.5, (1.0, 2.0)), 1, 1) == 0


def test_angular_displacement_flat_sum():
    assert angular_displacement(EvidenceSchedule(1.0, 0.0, (1.0, 1.0, 1.0)), 0, 3) == 3


def test_angular_displacement_sharp_decay():
    s = EvidenceSchedule(0.7, 1e6, (0.4, 2.0, 3.0))
    for n in (1, 2, 3):
        assert abs(angular_displacement(s, 0, n) - 0.7 * 0.4) < 1e-12


def test_angular_displacement_brute_force():
    s = EvidenceSchedule(0.3, 0.25, (0.5, 1.5, -0.2, 2.0))
    m, n = 1, 4
    expected = 0.3 * (1.5 * 1 + -0.2 * math.exp(-0.25) + 2.0 * math.exp(-1.0))
    assert angular_displacement(s, m, n) == pytest.approx(expected, abs=1e-15)


def test_default_schedule_gives_first_leg():
    assert angular_displacement(EvidenceSchedule(), 0, 1) == pytest.approx(0.2)


@pytest.mark.parametrize("m,n", [(-1, 0), (2, 1), (0, 5)])
def test_angular_displacement_range(m, n):
    with pytest.raises(ValidationError):
        angular_displacement(EvidenceSchedule(1.0, 0.0, (1.0, 1.0)), m, n)


def test_h_alpha_zero_mu_is_two_sigma_x():
    sx = np.array([[0, 1], [1, 0]])
    assert np.array_equal(h_alpha(0, 0), np.kron(np.eye(2), sx))


def test_h_alpha_block_values():
    h = h_alpha(0.3, 0.6)
    assert np.allclose(h[:2, :2], [[0.287348, 0.957826], [0.957826, -0.287348]], atol=1e-6)
    assert np.allclose(h[:2, :2], np.array([[0.3, 1], [1, -0.3]]) / math.sqrt(1.09), atol=1e-16)


@pytest.mark.parametrize("mu0,mu1", [(0, 0), (0.3, 0.6), (1.4, -2.0), (1e6, 5)])
def test_h_alpha_structure(mu0, mu1):
    h = h_alpha(mu0, mu1)
    assert np.array_equal(h, h.conj().T)
    assert np.all(h[:2, 2:] == 0) and np.all(h[2:, :2] == 0)
    for block in (h[:2, :2], h[2:, 2:]):
        assert np.allclose(np.linalg.eigvalsh(block), [-1, 1], atol=1e-14)


def test_h_alpha_printed_form_rejected():
    h = h_alpha_as_printed(0.3, 0.6)
    assert not qlin.is_hermitian(h)
    with pytest.raises(NumericalError):
        check_generator(h)
    with pytest.raises(NumericalError):
        u_interaction(FIG1, h)


def test_h_beta_zero():
    assert np.array_equal(h_beta(0), np.zeros((4, 4)))


def test_h_beta_sign_pattern():
    h = h_beta(math.sqrt(2)).real
    expected = np.zeros((4, 4))
    for ij in [(0, 0), (0, 2), (2, 0), (1, 3), (3, 1), (3, 3)]:
        expected[ij] = -1
    for ij in [(1, 1), (2, 2)]:
        expected[ij] = 1
    assert np.allclose(h, expected, atol=1e-15)
    assert np.array_equal(h_beta(2.09), h_beta(2.09).conj().T)


def test_h_total():
    assert np.array_equal(h_total(FIG1), h_alpha(0.3, 0.6))
    h = h_total(FIG2)
    assert np.max(np.abs(h - h.conj().T)) <= 1e-15
    assert np.array_equal(h, h_alpha(1.4, 1.4) + h_beta(2.09))


def test_model_params_validation():
    with pytest.raises(ValidationError):
        ModelParams(t_prime=-1)
    with pytest.raises(ValidationError):
        ModelParams(mu0=math.inf)


def test_closed_form_at_zero_time():
    nu, eta = ancilla_states_closed_form(ModelParams(0.3, 0.6, 0, 0))
    assert np.allclose(nu, [1, 0]) and np.allclose(eta, [1, 0])


def test_closed_form_equal_mu_not_entangling():
    nu, eta = ancilla_states_closed_form(ModelParams(1.4, 1.4, 0, 1.1))
    assert np.array_equal(nu, eta)


def test_closed_form_requires_gamma_zero():
    with pytest.raises(ValidationError, match="u_interaction"):
        ancilla_states_closed_form(FIG2)


@pytest.mark.parametrize("mu0", MU_GRID)
@pytest.mark.parametrize("mu1", MU_GRID)
@pytest.mark.parametrize("t", T_GRID)
def test_closed_form_matches_matrix_exponential(mu0, mu1, t):
    p = ModelParams(mu0, mu1, 0.0, t)
    nu, eta = ancilla_states_closed_form(p)
    u = expm(-1j * h_alpha(mu0, mu1) * t)
    assert np.max(np.abs(nu - u[:2, 0])) <= 1e-10
    assert np.max(np.abs(eta - u[2:, 2])) <= 1e-10
    nu_n, eta_n = ancilla_states_numeric(p)
    assert np.max(np.abs(nu - nu_n)) <= 1e-10
    assert np.max(np.abs(eta - eta_n)) <= 1e-10
    assert abs(np.linalg.norm(nu) - 1) < 1e-12 and abs(np.linalg.norm(eta) - 1) < 1e-12


def test_overlap_basic():
    assert overlap_re([1, 0], [1, 0]) == 1
    assert overlap_re([1, 0], [0, 1]) == 0
    with pytest.raises(ValidationError):
        overlap_re([1, 0], [1, 0, 0, 0])


def test_fig1_overlap_pinned():
    r = pointer_overlap(FIG1)
    assert 0 < r < 1
    assert r == pytest.approx(FIG1_OVERLAP, abs=1e-14)


@given(st.floats(-20, 20), st.floats(-20, 20))
def test_overlap_quarter_period(mu0, mu1):
    r = pointer_overlap(ModelParams(mu0, mu1, 0.0, math.pi / 2))
    th0, th1 = math.atan2(1, mu0), math.atan2(1, mu1)
    assert abs(r - math.cos(th0 - th1)) <= 1e-10


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 4))
def test_population_frozen_without_dissonance(mu0, mu1, t):
    u = u_interaction(ModelParams(mu0, mu1, 0.0, t))
    psi = np.array([math.cos(0.7), 0, -1j * math.sin(0.7), 0])
    out = u @ psi
    assert abs(np.sum(np.abs(out[:2]) ** 2) - math.cos(0.7) ** 2) <= 1e-10
