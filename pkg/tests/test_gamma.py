import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bsk.errors import DomainError
from bsk.gamma import half_step_ratio, log_gamma


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5 * math.log(math.pi)), (5.0, math.log(24.0))],
)
def test_known_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-14)


def test_exact_zeros():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(2.0) == 0.0


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_against_stdlib_on_range():
    xs = np.linspace(0.5, 200.0, 4001)
    worst = max(abs(log_gamma(x) - math.lgamma(x)) / max(1.0, abs(math.lgamma(x))) for x in xs)
    assert worst < 1e-13


@given(st.floats(min_value=0.05, max_value=100.0))
def test_duplication_formula(x):
    # G(x) G(x + 1/2) = 2^(1 - 2x) sqrt(pi) G(2x)
    lhs = log_gamma(x) + log_gamma(x + 0.5)
    rhs = (1 - 2 * x) * math.log(2.0) + 0.5 * math.log(math.pi) + log_gamma(2 * x)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@given(st.floats(min_value=0.01, max_value=150.0))
def test_recurrence_shift(x):
    assert log_gamma(x + 1) - log_gamma(x) == pytest.approx(math.log(x), abs=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 1.5, 2.0, 7.5, 40.0, 0.3, 2.7])
def test_half_step_ratio_matches_stdlib(alpha):
    ref = math.exp(math.lgamma(alpha + 1) - math.lgamma(alpha + 0.5)) / math.sqrt(math.pi)
    assert half_step_ratio(alpha) == pytest.approx(ref, rel=1e-13)


def test_half_step_ratio_exact_at_three_halves():
    # G(5/2)/(sqrt(pi) G(2)) = 3/4, so 2 * 1 * ratio is exactly 1.5
    assert 2.0 * half_step_ratio(1.5) == 1.5
    assert half_step_ratio(0.5) == 0.5
