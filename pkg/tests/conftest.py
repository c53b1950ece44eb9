import numpy as np
import pytest
from hypothesis import strategies as st

from twocavity import LocalAmplitudes, SystemParams

# Reference parameter sets for the three regimes (units of g).
LARGE_HOPPING = SystemParams(g=1.0, A=10.0, delta=0.1, omega_f=1000.0)
ON_RESONANCE = SystemParams(g=1.0, A=100.0, delta=100.0, omega_f=1000.0)
NEAR_RESONANCE = SystemParams(g=1.0, A=100.1, delta=100.0, omega_f=1000.0)
ATOM1 = LocalAmplitudes(c=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def amplitudes(draw):
    parts = [draw(finite) for _ in range(8)]
    return LocalAmplitudes(*(complex(parts[2 * i], parts[2 * i + 1]) for i in range(4)))


@st.composite
def params(draw, omega_f=st.floats(0, 2000)):
    return SystemParams(
        g=draw(st.floats(0.1, 5)),
        A=draw(st.floats(-200, 200)),
        delta=draw(st.floats(-200, 200)),
        omega_f=draw(omega_f),
    )


def random_state(rng, n=4):
    x = rng.normal(size=n) + 1j * rng.normal(size=n)
    return x / np.linalg.norm(x)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
