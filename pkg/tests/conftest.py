import math

import numpy as np
import pytest

from baezeno.model import ModelParams

FIG1 = ModelParams(mu0=0.3, mu1=0.6, gamma=0.0, t_prime=math.pi / 2)
FIG2 = ModelParams(mu0=1.4, mu1=1.4, gamma=2.09, t_prime=math.pi / 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, d, scale=1.0):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (z + z.conj().T) / 2


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion outcome; fails the test when not ok."""

    def record(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} {label}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
