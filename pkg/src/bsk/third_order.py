"""Third-order subordination objects built on g_alpha(z) = z S_alpha(z).

lam is fixed at 1 throughout. The recurrence

    z g'_a = 2 a g_{a-1} + (1 - 2 a) g_a

expresses g_a, g_{a-1}, g_{a-2} through p = g_{a+1} and its first three
derivatives. The beta transforms encode that change of variables for the
admissibility conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import DegenerateDenominatorError, DomainError, NumericalError
from .grid import DiskGrid
from .janowski import worst_point
from .kernel import DEFAULT_CONFIG, EvalConfig, KernelParams, _as_points, _finish, eval_derivative
from .polygon import check_simple, signed_distance
from .targets import Target


def _g_derivatives(alpha: float, pts: np.ndarray, upto: int, cfg: EvalConfig) -> list[np.ndarray]:
    """[g, g', ..., g^(upto)] with g^(k) = k S^(k-1) + z S^(k)."""
    p = KernelParams(alpha, 1.0)
    s = [eval_derivative(p, pts, k, cfg) for k in range(upto + 1)]
    out = [pts * s[0]]
    for k in range(1, upto + 1):
        out.append(k * s[k - 1] + pts * s[k])
    return out


def eval_g(alpha: float, z, cfg: EvalConfig = DEFAULT_CONFIG):
    """g_alpha(z) = z S_{alpha,1}(z)."""
    pts, scalar = _as_points(z)
    return _finish(_g_derivatives(alpha, pts, 0, cfg)[0], scalar)


def g_recurrence_residual(alpha: float, z, cfg: EvalConfig = DEFAULT_CONFIG):
    """z g'_a - 2 a g_{a-1} - (1 - 2 a) g_a."""
    if not alpha - 1.0 > -0.5:
        raise DomainError(f"g recurrence needs alpha > 1/2, got {alpha!r}")
    pts, scalar = _as_points(z)
    g, dg = _g_derivatives(alpha, pts, 1, cfg)
    (g_lower,) = _g_derivatives(alpha - 1.0, pts, 0, cfg)
    return _finish(pts * dg - 2 * alpha * g_lower - (1 - 2 * alpha) * g, scalar)


class ChainResiduals(NamedTuple):
    r1: complex
    r2: complex
    r3: complex


def chain_identities_residuals(
    alpha: float,
    z,
    cfg: EvalConfig = DEFAULT_CONFIG,
    variant: Literal["corrected", "printed"] = "corrected",
) -> ChainResiduals:
    """Residuals of g_a, g_{a-1}, g_{a-2} written through p = g_{a+1}.

    ``corrected`` uses the coefficients obtained by applying the recurrence
    twice more:

        g_{a-1} = (z^2 p'' + (4a+1) z p' + (4a^2-1) p) / (4a(a+1))
        g_{a-2} = (z^3 p''' + 6a z^2 p'' + (12a^2-6a-3) z p'
                   + (4a^2-1)(2a-3) p) / (8a(a^2-1))

    ``printed`` uses 4a in place of 4a+1 for the second, and 6a-1 and
    12a^2-8a-1 for the third; those only hold at z = 0. The first identity
    g_a = (z p' + (2a+1) p) / (2(a+1)) is common to both.
    """
    if variant not in ("corrected", "printed"):
        raise DomainError(f"unknown chain-identity variant {variant!r}")
    if not alpha - 2.0 > -0.5:
        raise DomainError(f"chain identities need alpha > 3/2, got {alpha!r}")
    a = alpha
    pts, scalar = _as_points(z)
    p, p1, p2, p3 = _g_derivatives(a + 1.0, pts, 3, cfg)
    (g0,) = _g_derivatives(a, pts, 0, cfg)
    (gm1,) = _g_derivatives(a - 1.0, pts, 0, cfg)
    (gm2,) = _g_derivatives(a - 2.0, pts, 0, cfg)
    zp1, z2p2, z3p3 = pts * p1, pts**2 * p2, pts**3 * p3
    if variant == "corrected":
        c2, c3a, c3b = 4 * a + 1, 6 * a, 12 * a * a - 6 * a - 3
    else:
        c2, c3a, c3b = 4 * a, 6 * a - 1, 12 * a * a - 8 * a - 1
    r1 = g0 - (zp1 + (2 * a + 1) * p) / (2 * (a + 1))
    r2 = gm1 - (z2p2 + c2 * zp1 + (4 * a * a - 1) * p) / (4 * a * (a + 1))
    r3 = gm2 - (z3p3 + c3a * z2p2 + c3b * zp1 + (4 * a * a - 1) * (2 * a - 3) * p) / (
        8 * a * (a * a - 1)
    )
    return ChainResiduals(*(_finish(r, scalar) for r in (r1, r2, r3)))


# ---------------------------------------------------------------------------
# beta transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaQuadruple:
    beta1: complex
    beta2: complex
    beta3: complex
    beta4: complex
    #: (r, s, t, u, alpha) when produced by :func:`beta_transforms`
    source: tuple | None = None

    def as_tuple(self) -> tuple:
        return (self.beta1, self.beta2, self.beta3, self.beta4)


def _check_alpha(alpha: float) -> None:
    if not alpha > 1.0:
        raise DomainError(f"beta transforms need alpha > 1, got {alpha!r}")


def beta_transforms(r, s, t, u, alpha: float) -> BetaQuadruple:
    """Forward change of variables, with the coefficients as stated."""
    _check_alpha(alpha)
    a = alpha
    b1 = r
    b2 = (s + (a + 1) * r) / (a + 1)
    b3 = (t + 4 * a * s + (4 * a * a - 1) * r) / (4 * a * (a + 1))
    b4 = (u + (6 * a - 1) * t + (12 * a * a - 8 * a - 1) * s + (2 * a - 3) * (4 * a * a - 1) * r) / (
        8 * a * (a * a - 1)
    )
    return BetaQuadruple(b1, b2, b3, b4, source=(r, s, t, u, alpha))


def inverse_beta(
    q: BetaQuadruple, alpha: float, variant: Literal["consistent", "printed"] = "consistent"
) -> tuple:
    """Recover (r, s, t, u) from a beta quadruple.

    ``consistent`` inverts :func:`beta_transforms` exactly (back
    substitution). ``printed`` returns the closed forms

        s = 2(a+1)(b2-b1)
        t = 4a(a+1) b3 + 8a(a+1) b2 - (4a^2+8a+1) b1
        u = 8a(a^2-1) b4 - 4a(a+1)(6a-1) b3 + 2(a+1)(36a^2-12a-1) b2
            + (40a^3+16a^2-18a-6) b1

    which are not an inverse of the forward map: s is off by a factor 2 and
    the b2, b1 terms of t have flipped signs.
    """
    _check_alpha(alpha)
    a = alpha
    b1, b2, b3, b4 = q.as_tuple()
    if variant == "consistent":
        r = b1
        s = (a + 1) * (b2 - b1)
        t = 4 * a * (a + 1) * b3 - 4 * a * s - (4 * a * a - 1) * r
        u = (
            8 * a * (a * a - 1) * b4
            - (6 * a - 1) * t
            - (12 * a * a - 8 * a - 1) * s
            - (2 * a - 3) * (4 * a * a - 1) * r
        )
        return r, s, t, u
    if variant == "printed":
        s = 2 * (a + 1) * (b2 - b1)
        t = 4 * a * (a + 1) * b3 + 8 * a * (a + 1) * b2 - (4 * a * a + 8 * a + 1) * b1
        u = (
            8 * a * (a * a - 1) * b4
            - 4 * a * (a + 1) * (6 * a - 1) * b3
            + 2 * (a + 1) * (36 * a * a - 12 * a - 1) * b2
            + (40 * a**3 + 16 * a * a - 18 * a - 6) * b1
        )
        return b1, s, t, u
    raise DomainError(f"unknown inverse variant {variant!r}")


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------

_EXCLUSION = 1e-6


@dataclass(frozen=True)
class AdmissibilityProbe:
    """Boundary data of q at one point zeta of the unit circle.

    Holds q(zeta) and the raw derivatives q'(zeta), q''(zeta), q'''(zeta).
    """

    q_value: complex
    dq: complex
    d2q: complex
    d3q: complex
    zeta: complex
    m: float
    alpha: float

    def __post_init__(self) -> None:
        if abs(abs(self.zeta) - 1.0) > 1e-12:
            raise DomainError(f"zeta must lie on the unit circle, got |zeta|={abs(self.zeta)!r}")
        if not self.m >= 2:
            raise DomainError(f"m must be >= 2, got {self.m!r}")
        if not self.alpha > 1:
            raise DomainError(f"alpha must exceed 1, got {self.alpha!r}")


def make_probe(q: Target, zeta: complex, m: float, alpha: float) -> AdmissibilityProbe:
    """Probe for ``q`` at ``zeta``, refusing points within 1e-6 of E(q)."""
    zeta = complex(zeta)
    for e in q.exceptional:
        if abs(zeta - e) < _EXCLUSION:
            raise DomainError(f"zeta={zeta!r} is an exceptional boundary point of q")
    vals = [complex(q(zeta))] + [complex(q.derivative(zeta, k)) for k in (1, 2, 3)]
    return AdmissibilityProbe(*vals, zeta=zeta, m=m, alpha=alpha)


def admissible_betas(probe: AdmissibilityProbe) -> tuple[complex, complex]:
    """beta1 and beta2 forced by the first admissibility condition."""
    a, z = probe.alpha, probe.zeta
    return probe.q_value, (probe.m * z * probe.dq + (a + 1) * probe.q_value) / (a + 1)


class AdmissibilityConditions(NamedTuple):
    cond1: bool
    cond2: bool
    cond3: bool


def admissibility_check(
    probe: AdmissibilityProbe,
    q: BetaQuadruple,
    *,
    variant: Literal["printed", "third_derivative"] = "printed",
    rtol: float = 1e-12,
) -> AdmissibilityConditions:
    """Evaluate the three admissibility conditions at one probe.

    cond1: beta1 = q(zeta), beta2 = (m zeta q' + (a+1) q)/(a+1) (to ``rtol``).
    cond2: Re(T / S + 1) >= m Re(zeta q''/q' + 1).
    cond3: Re(U / S) >= m^2 Re(zeta^2 q''/q')      (``printed``)
           Re(U / S) >= m^2 Re(zeta^2 q'''/q')     (``third_derivative``)

    Here S, T, U are the closed-form inverses of
    :func:`inverse_beta` with ``variant="printed"``. The right-hand side of
    cond3 is stated with q''; the underlying third-order theory uses q''',
    hence the switch.
    """
    if variant not in ("printed", "third_derivative"):
        raise DomainError(f"unknown cond3 variant {variant!r}")
    a, zeta, m = probe.alpha, probe.zeta, probe.m
    b1, b2, _, _ = q.as_tuple()
    if abs(b2 - b1) < 1e-14:
        raise DegenerateDenominatorError("beta2 - beta1 vanishes")
    if probe.dq == 0:
        raise DegenerateDenominatorError("q'(zeta) vanishes")

    want1, want2 = admissible_betas(probe)
    scale = max(1.0, abs(want1), abs(want2))
    cond1 = abs(b1 - want1) <= rtol * scale and abs(b2 - want2) <= rtol * scale

    _, s, t, u = inverse_beta(q, a, variant="printed")
    cond2 = (t / s + 1).real >= m * (zeta * probe.d2q / probe.dq + 1).real
    curv = probe.d2q if variant == "printed" else probe.d3q
    cond3 = (u / s).real >= m * m * (zeta * zeta * curv / probe.dq).real
    return AdmissibilityConditions(bool(cond1), bool(cond2), bool(cond3))


# ---------------------------------------------------------------------------
# dominance
# ---------------------------------------------------------------------------


class Dominance(NamedTuple):
    dominated: bool
    min_margin: float
    witness: complex


def boundary_polygon(q: Target, n_vertices: int = 4096, radius: float = 1 - 1e-6) -> np.ndarray:
    """Image of the circle |z| = radius under q, as polygon vertices."""
    theta = 2 * np.pi * np.arange(n_vertices) / n_vertices
    poly = np.asarray(q(radius * np.exp(1j * theta)), dtype=complex)
    if not np.all(np.isfinite(poly)):
        raise NumericalError("target is not finite on the tracing circle")
    return poly


def image_dominance(
    f,
    q: Target,
    grid: DiskGrid,
    *,
    n_vertices: int = 4096,
    tol: float = 1e-7,
) -> Dominance:
    """Sampled test of f(0) = q(0) = 0 and f(grid) inside q(disk).

    q(disk) is approximated by the polygon q traces on |z| = 1 - 1e-6. The
    verdict is positive when the worst signed distance exceeds ``-tol``; a
    self-intersecting polygon raises :class:`DegenerateTargetError`.
    """
    q0 = complex(q(0.0))
    if abs(q0) > 1e-12:
        raise DomainError(f"target must satisfy q(0) = 0, got {q0!r}")
    f0 = complex(np.asarray(f(np.zeros(1, dtype=complex)))[0])
    poly = boundary_polygon(q, n_vertices)
    check_simple(poly)
    pts = grid.points
    margins = signed_distance(poly, np.asarray(f(pts), dtype=complex))
    lo, witness = worst_point(pts, margins)
    ok = abs(f0 - q0) <= 1e-12 and lo > -tol
    return Dominance(bool(ok), lo, witness)


def numeric_dominance(
    alpha: float, q: Target, grid: DiskGrid, cfg: EvalConfig = DEFAULT_CONFIG, **kw
) -> Dominance:
    """Sampled check of g_{alpha+1} subordinate to the univalent target q."""
    if not alpha > 1.0:
        raise DomainError(f"dominance check needs alpha > 1, got {alpha!r}")
    return image_dominance(lambda z: eval_g(alpha + 1.0, z, cfg), q, grid, **kw)
