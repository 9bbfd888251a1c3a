"""Log-gamma and the gamma ratios that appear in the kernel."""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError

# Lanczos approximation, g = 7, n = 9.
_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_PI = math.sqrt(math.pi)

# exact-rational branch is only used while factorials stay cheap
_EXACT_ORDER_LIMIT = 170


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    Uses the Lanczos approximation on ``x >= 0.5`` and the shift
    ``ln G(x) = ln G(x + 1) - ln x`` below that.

    >>> round(log_gamma(5.0), 10)
    3.1780538303
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    if x == 1.0 or x == 2.0:
        return 0.0
    x -= 1.0
    acc = _COEF[0]
    for k in range(1, len(_COEF)):
        acc += _COEF[k] / (x + k)
    t = x + _G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc)


def _half_integer_index(alpha: float) -> int | None:
    two_a = 2.0 * alpha
    if two_a.is_integer() and 0 <= two_a <= 2 * _EXACT_ORDER_LIMIT:
        return int(two_a)
    return None


def half_step_ratio(alpha: float) -> float:
    """Return ``G(alpha + 1) / (sqrt(pi) * G(alpha + 1/2))`` for ``alpha > -1/2``.

    This single ratio generates every gamma constant of the kernel: the
    integral prefactor is ``2 * ratio``, the inhomogeneous ODE constant is
    ``M = 2 * lam * ratio`` and the first series coefficient is
    ``lam * ratio / (alpha + 1/2)``.

    When ``2*alpha`` is a non-negative integer the ratio is evaluated from
    exact factorials (it is rational for half-integer ``alpha`` and a
    rational multiple of ``1/pi`` for integer ``alpha``); otherwise it is
    ``exp`` of a log-gamma difference.
    """
    alpha = float(alpha)
    if not alpha > -0.5:
        raise DomainError(f"alpha must exceed -1/2, got {alpha!r}")
    k2 = _half_integer_index(alpha)
    if k2 is None:
        return math.exp(log_gamma(alpha + 1.0) - log_gamma(alpha + 0.5)) / _SQRT_PI
    f = math.factorial
    if k2 % 2 == 0:
        k = k2 // 2
        # G(k+1)/G(k+1/2) = 4^k (k!)^2 / ((2k)! sqrt(pi))
        return float(Fraction(4**k * f(k) ** 2, f(2 * k))) / math.pi
    n = (k2 - 1) // 2
    # alpha = n + 1/2: G(n+3/2)/(sqrt(pi) G(n+1)) = (2n+2)! / (4^(n+1) (n+1)! n!)
    return float(Fraction(f(2 * n + 2), 4 ** (n + 1) * f(n + 1) * f(n)))
