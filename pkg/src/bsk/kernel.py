"""The Bessel-Struve kernel S_{alpha,lam}(z) on the unit disk.

S_{alpha,lam}(z) = j_alpha(i lam z) - i h_alpha(i lam z) is entire in z, with
Maclaurin coefficients

    c_n = G(alpha+1) G((n+1)/2) lam^n / (sqrt(pi) n! G(n/2 + alpha + 1))

and the integral representation

    S(z) = 2 G(alpha+1) / (sqrt(pi) G(alpha+1/2)) * int_0^1 (1-t^2)^(alpha-1/2) e^(lam z t) dt.

Both routes are implemented independently so each can check the other.
Every evaluator accepts a scalar or an array of points; scalars come back
as Python ``complex``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ConvergenceError, DomainError, NumericalError
from .gamma import half_step_ratio, log_gamma
from .quadrature import tanh_sinh

_LOG_SQRT_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class KernelParams:
    """Order ``alpha > -1/2`` and complex spectral parameter ``lam``.

    ``m_const`` is the constant M = 2 lam G(alpha+1) / (sqrt(pi) G(alpha+1/2))
    on the right-hand side of the kernel ODE. It is derived on construction
    and cannot be passed in.
    """

    alpha: float
    lam: complex = 1.0
    m_const: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        lam = complex(self.lam)
        if not math.isfinite(alpha) or not alpha > -0.5:
            raise DomainError(f"alpha must be a finite number > -1/2, got {self.alpha!r}")
        if not cmath.isfinite(lam):
            raise DomainError(f"lambda must be finite, got {self.lam!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "m_const", 2.0 * lam * half_step_ratio(alpha))


@dataclass(frozen=True)
class EvalConfig:
    rel_tol: float = 1e-16
    max_terms: int = 400
    quad_levels: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.rel_tol < 1.0:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise DomainError(f"max_terms must be an integer >= 16, got {self.max_terms!r}")
        if int(self.quad_levels) != self.quad_levels or self.quad_levels < 1:
            raise DomainError(f"quad_levels must be a positive integer, got {self.quad_levels!r}")


DEFAULT_CONFIG = EvalConfig()


def _as_points(z, *, allow_boundary: bool = False):
    """Coerce to a complex array and enforce the disk contract."""
    scalar = np.ndim(z) == 0
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(arr)):
        raise DomainError("z must be finite")
    mod = np.abs(arr)
    bad = mod > 1.0 if allow_boundary else mod >= 1.0
    if np.any(bad):
        worst = arr[np.argmax(mod)]
        raise DomainError(f"z must lie in the open unit disk, got {complex(worst)}")
    return arr, scalar


def _finish(values: np.ndarray, scalar: bool):
    if not np.all(np.isfinite(values)):
        raise NumericalError("non-finite kernel value")
    return complex(values[0]) if scalar else values


def first_slope(params: KernelParams) -> complex:
    """S'(0) = lam G(alpha+1) / (sqrt(pi) G(alpha+3/2))."""
    return params.lam * half_step_ratio(params.alpha) / (params.alpha + 0.5)


def series_coefficient(params: KernelParams, n: int) -> complex:
    """Maclaurin coefficient c_n, evaluated in log space.

    Independent of the recurrence used by :func:`eval_series`, which makes it
    a cross-check for that path.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return 1.0 + 0.0j
    lam = params.lam
    if lam == 0:
        return 0.0j
    a = params.alpha
    log_mag = (
        log_gamma(a + 1.0)
        + log_gamma((n + 1) / 2.0)
        - _LOG_SQRT_PI
        - log_gamma(n + 1.0)
        - log_gamma(n / 2.0 + a + 1.0)
        + n * math.log(abs(lam))
    )
    return cmath.rect(math.exp(log_mag), n * cmath.phase(lam))


def _coefficients(params: KernelParams, count: int) -> list[complex]:
    """c_0 .. c_{count-1} via c_{n+2} = c_n lam^2 / ((n+2)(n+2+2 alpha))."""
    lam2 = params.lam * params.lam
    two_a = 2.0 * params.alpha
    c = [1.0 + 0.0j, complex(first_slope(params))]
    while len(c) < count:
        n = len(c) - 2
        c.append(c[n] * lam2 / ((n + 2) * (n + 2 + two_a)))
    return c[:count]


def _falling(n: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= n - j
    return out


def _sum_series(params: KernelParams, z: np.ndarray, order: int, cfg: EvalConfig) -> np.ndarray:
    """Sum the ``order``-th derivative of the Maclaurin series at each point.

    Stops at term n once, at every point, |t_n| <= rel_tol |partial sum| and
    |t_{n+1}| <= |t_n| / 2; the second condition keeps the tail below
    2 |t_{n+1}| because the coefficients decay factorially.
    """
    k = order
    coef = _coefficients(params, cfg.max_terms + k + 2)
    total = np.zeros_like(z)
    zpow = np.ones_like(z)  # z^(n-k)
    term = coef[k] * _falling(k, k) * zpow
    for n in range(k, cfg.max_terms + k):
        total = total + term
        zpow_next = zpow * z
        nxt = coef[n + 1] * _falling(n + 1, k) * zpow_next
        small = np.abs(term) <= cfg.rel_tol * np.abs(total)
        shrinking = np.abs(nxt) <= 0.5 * np.abs(term)
        if np.all((small & shrinking) | ((term == 0) & (nxt == 0))):
            return total
        term, zpow = nxt, zpow_next
    raise ConvergenceError(
        f"kernel series not converged within max_terms={cfg.max_terms}"
    )


def _trivial(params: KernelParams) -> bool:
    return params.lam == 0


def eval_series(params: KernelParams, z, cfg: EvalConfig = DEFAULT_CONFIG):
    """S_{alpha,lam}(z) by summing the power series (|z| < 1)."""
    pts, scalar = _as_points(z)
    if _trivial(params):
        return _finish(np.ones_like(pts), scalar)
    out = _sum_series(params, pts, 0, cfg)
    out[pts == 0] = 1.0
    return _finish(out, scalar)


def eval_derivative(params: KernelParams, z, order: int = 1, cfg: EvalConfig = DEFAULT_CONFIG):
    """``order``-th z-derivative of the kernel by term-wise differentiation.

    Orders 0 through 3 are supported; 3 is needed by the third-order chain
    identities.
    """
    if order not in (0, 1, 2, 3):
        raise DomainError(f"derivative order must be 0..3, got {order!r}")
    if order == 0:
        return eval_series(params, z, cfg)
    pts, scalar = _as_points(z)
    if _trivial(params):
        return _finish(np.zeros_like(pts), scalar)
    return _finish(_sum_series(params, pts, order, cfg), scalar)


def eval_integral(params: KernelParams, z, cfg: EvalConfig = DEFAULT_CONFIG, *, chunk: int = 512):
    """S_{alpha,lam}(z) from the integral representation.

    With t = sin(theta) the weight becomes cos(theta)^(2 alpha) on
    [0, pi/2]. The endpoint value e^{lam z} is split off using the exact
    weight integral, so the remaining integrand vanishes like
    d^(2 alpha + 2) at distance d from pi/2 and stays tame for alpha near
    -1/2. Points are processed in blocks of ``chunk``.
    """
    pts, scalar = _as_points(z)
    if _trivial(params):
        return _finish(np.ones_like(pts), scalar)
    a2 = 2.0 * params.alpha
    prefactor = 2.0 * half_step_ratio(params.alpha)
    out = np.empty_like(pts)
    for lo in range(0, pts.size, chunk):
        w = params.lam * pts[lo : lo + chunk]

        def integrand(theta, _da, db, w=w):
            cos_t = np.sin(db)
            one_minus_sin = 2.0 * np.sin(0.5 * db) ** 2
            return (cos_t**a2)[:, None] * np.expm1(-np.outer(one_minus_sin, w))

        rest = tanh_sinh(integrand, 0.0, 0.5 * math.pi, rel_tol=cfg.rel_tol, levels=cfg.quad_levels)
        out[lo : lo + chunk] = np.exp(w) * (1.0 + prefactor * rest)
    return _finish(out, scalar)


def closed_form_half(lam: complex, z):
    """S_{1/2,lam}(z) = (e^{lam z} - 1) / (lam z), stable near lam z = 0.

    This is an oracle for the alpha = 1/2 kernel, kept free of any series or
    quadrature code.
    """
    w = np.asarray(lam * np.asarray(z, dtype=complex), dtype=complex)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    out = np.ones_like(w)
    nz = w != 0
    x, y = w[nz].real, w[nz].imag
    # e^{x+iy} - 1 = expm1(x) cos y + (cos y - 1) + i e^x sin y
    cos_m1 = -2.0 * np.sin(0.5 * y) ** 2
    num = np.expm1(x) * np.cos(y) + cos_m1 + 1j * np.exp(x) * np.sin(y)
    out[nz] = num / w[nz]
    return complex(out[0]) if scalar else out


def ode_residual(
    params: KernelParams,
    z,
    variant: Literal["printed", "corrected"] = "corrected",
    cfg: EvalConfig = DEFAULT_CONFIG,
):
    """Residual of the kernel's inhomogeneous ODE.

    ``corrected``: z^2 S'' + (2 alpha + 1) z S' - lam^2 z^2 S - z M, which
    follows from the Bessel-Struve operator and vanishes identically.

    ``printed``: z^2 S'' + (2 alpha + 1) z S' - z lam^2 S - z M, the form with
    a single power of z on the lam^2 term. It does not vanish; its offset
    from the corrected form is corrected - printed = lam^2 (z - z^2) S.
    """
    if variant not in ("printed", "corrected"):
        raise DomainError(f"unknown ODE variant {variant!r}")
    pts, scalar = _as_points(z)
    s0 = eval_series(params, pts, cfg)
    s1 = eval_derivative(params, pts, 1, cfg)
    s2 = eval_derivative(params, pts, 2, cfg)
    lam2 = params.lam**2
    z_pow = pts * pts if variant == "corrected" else pts
    res = pts * pts * s2 + (2 * params.alpha + 1) * pts * s1 - lam2 * z_pow * s0 - pts * params.m_const
    return _finish(res, scalar)


def recurrence_residual(alpha: float, z, cfg: EvalConfig = DEFAULT_CONFIG):
    """z S'_alpha(z) - 2 alpha S_{alpha-1}(z) + 2 alpha S_alpha(z), with lam = 1."""
    if not alpha - 1.0 > -0.5:
        raise DomainError(f"recurrence needs alpha > 1/2, got {alpha!r}")
    pts, scalar = _as_points(z)
    p = KernelParams(alpha, 1.0)
    q = KernelParams(alpha - 1.0, 1.0)
    res = (
        pts * eval_derivative(p, pts, 1, cfg)
        - 2 * alpha * eval_series(q, pts, cfg)
        + 2 * alpha * eval_series(p, pts, cfg)
    )
    return _finish(res, scalar)
