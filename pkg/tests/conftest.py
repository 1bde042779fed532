import math

import numpy as np
import pytest
from hypothesis import strategies as st

from securehda.model import SystemParams, fig4_params, validate, wiretap_capacity


def draw_params(rng, i_eps=None, rate_frac=None):
    """One random valid parameter set; leakage kept small enough for the uncoded scheme to be feasible."""
    p = 10 ** rng.uniform(-1, 2)
    n1 = 10 ** rng.uniform(-1, 1)
    n2 = n1 * (1 + 10 ** rng.uniform(-2, 1))
    sigma_v2 = rng.uniform(0.5, 20)
    sigma_t2 = sigma_v2 * rng.uniform(0.05, 0.95)
    if i_eps is None:
        # keep n2 * (2**(2 i_eps) - 1) <= p
        i_max = 0.5 * math.log2(1 + p / n2)
        i_eps = rng.uniform(0, min(1.0, i_max))
    cap = wiretap_capacity(p, n1, n2)
    frac = rng.uniform(0, 1) if rate_frac is None else rate_frac
    return validate(SystemParams(p, n1, n2, sigma_v2, sigma_t2, i_eps, frac * cap))


@pytest.fixture
def fig4():
    return fig4_params()


@pytest.fixture
def param_draws():
    rng = np.random.default_rng(20240601)
    return [draw_params(rng) for _ in range(1000)]


@st.composite
def valid_params(draw, zero_leakage=False):
    p = draw(st.floats(0.1, 100.0))
    n1 = draw(st.floats(0.1, 10.0))
    n2 = n1 * (1 + draw(st.floats(0.01, 10.0)))
    sigma_v2 = draw(st.floats(0.5, 20.0))
    sigma_t2 = sigma_v2 * draw(st.floats(0.05, 0.95))
    i_eps = 0.0 if zero_leakage else draw(st.floats(0.0, 1.0))
    rate_r = draw(st.floats(0.0, 1.0)) * wiretap_capacity(p, n1, n2)
    return validate(SystemParams(p, n1, n2, sigma_v2, sigma_t2, i_eps, rate_r))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
