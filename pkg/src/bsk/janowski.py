"""Janowski-class geometry and membership tests for the kernel.

Two kinds of evidence are kept apart here:

* ``check_theorem1`` / ``check_theorem2`` evaluate the sufficient
  conditions for S_{alpha,lam} in P[A, B] exactly as they are stated, with no
  tolerance slack. A ``CERTIFIED`` verdict is a proof (modulo the
  nonattainment hypothesis, reported separately by :func:`hypothesis_gap`).
* ``numeric_membership`` samples the disk and checks image containment.
  That is corroboration on a finite grid, never a certificate.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, NamedTuple

import numpy as np

from .errors import DomainError, NumericalError, PoleError
from .gamma import half_step_ratio, log_gamma
from .grid import DiskGrid
from .kernel import DEFAULT_CONFIG, EvalConfig, KernelParams, eval_derivative, eval_series

#: Upper end of the B-range of the first theorem, lower end of the second.
B_SPLIT = 3.0 - 2.0 * math.sqrt(2.0)

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class JanowskiPair:
    a_param: float
    b_param: float

    def __post_init__(self) -> None:
        a, b = float(self.a_param), float(self.b_param)
        if not (-1.0 <= b < a <= 1.0):
            raise DomainError(f"need -1 <= B < A <= 1, got A={a!r}, B={b!r}")
        object.__setattr__(self, "a_param", a)
        object.__setattr__(self, "b_param", b)


@dataclass(frozen=True)
class TargetRegion:
    """Open image of the unit disk under (1 + A z) / (1 + B z).

    For ``kind == "half_plane"`` the region is ``Re w > boundary_re``; for
    ``kind == "disk"`` it is ``|w - center| < radius``.
    """

    kind: Literal["disk", "half_plane"]
    center: complex = 0j
    radius: float = math.inf
    boundary_re: float = -math.inf

    def margin(self, w) -> np.ndarray:
        """Signed distance to the boundary, positive inside.

        Half-plane margins are ``Re w - boundary_re`` and disk margins are
        ``radius - |w - center|``; the two kinds are comparable by sign only.
        """
        w = np.asarray(w, dtype=complex)
        if self.kind == "half_plane":
            return w.real - self.boundary_re
        return self.radius - np.abs(w - self.center)

    def contains(self, w) -> np.ndarray:
        return self.margin(w) > 0


def mobius_target(pair: JanowskiPair, z):
    """(1 + A z) / (1 + B z) for |z| <= 1 away from the pole."""
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz) > 1.0 + 1e-12):
        raise DomainError("mobius_target is defined on the closed unit disk")
    den = 1.0 + pair.b_param * zz
    if np.any(den == 0):
        raise PoleError("1 + B z vanishes")
    out = (1.0 + pair.a_param * zz) / den
    return complex(out) if out.ndim == 0 else out


def target_region(pair: JanowskiPair) -> TargetRegion:
    a, b = pair.a_param, pair.b_param
    if b == -1.0:
        return TargetRegion("half_plane", boundary_re=(1.0 - a) / 2.0)
    d = 1.0 - b * b
    return TargetRegion("disk", center=complex((1.0 - a * b) / d), radius=(a - b) / d)


# ---------------------------------------------------------------------------
# theorem predicates
# ---------------------------------------------------------------------------


class Certification(str, enum.Enum):
    CERTIFIED = "certified"
    NOT_CERTIFIED = "not_certified"
    OUT_OF_SCOPE = "out_of_scope"


@dataclass(frozen=True)
class TheoremReport:
    """Every clause of a theorem predicate, for diagnostics."""

    verdict: Certification
    hypothesis: bool = False
    branch1_applies: bool = False
    branch1_holds: bool = False
    branch2_applies: bool = False
    branch2_holds: bool = False
    reason: str = ""


def _real_lambda(lam) -> float | None:
    c = complex(lam)
    if c.imag != 0 or not math.isfinite(c.real):
        return None
    return c.real


def _scope(pair: JanowskiPair, alpha, lam, b_ok: Callable[[float], bool], which: str):
    if not b_ok(pair.b_param):
        return None, f"B={pair.b_param!r} outside the B-range of {which}"
    lr = _real_lambda(lam)
    if lr is None:
        return None, "lambda must be real"
    alpha = float(alpha)
    if not math.isfinite(alpha) or not alpha > -0.5:
        return None, "alpha must be a finite number > -1/2"
    return (alpha, lr, 2.0 * lr * half_step_ratio(alpha)), ""


def _alpha_bound(a, b, lam, m) -> float:
    return max(0.0, abs(lam) / 2.0 * abs((lam * (1 + a) * (1 + b) + m * (1 + b) ** 2) / (a - b)))


def _verdict(hyp, b1a, b1h, b2a, b2h) -> TheoremReport:
    ok = hyp and ((b1a and b1h) or (b2a and b2h))
    return TheoremReport(
        Certification.CERTIFIED if ok else Certification.NOT_CERTIFIED,
        hyp, b1a, b1h, b2a, b2h,
        "" if hyp else "alpha below the hypothesis bound",
    )


def evaluate_theorem1(pair: JanowskiPair, alpha: float, lam: float) -> TheoremReport:
    """All clauses of the first inclusion theorem (-1 <= B <= 3 - 2 sqrt 2).

    Branch 1 is the inequality paired with the ``>=`` whenever-clause,
    branch 2 the one paired with the ``<`` clause; the clauses are
    complementary so exactly one branch applies.
    """
    vals, why = _scope(pair, alpha, lam, lambda b: -1.0 <= b <= B_SPLIT, "the first inclusion predicate")
    if vals is None:
        return TheoremReport(Certification.OUT_OF_SCOPE, reason=why)
    al, l, m = vals
    a, b = pair.a_param, pair.b_param
    k = l * (a + b) + 2 * m * b
    big_l = l * (1 + a) + m * (1 + b)
    q = l * (1 - a) + m * (1 - b)
    p = l * l * (1 - a * b) + l * m * (1 - b * b)

    hyp = al >= _alpha_bound(a, b, l, m)

    switch = abs(4 * al * k * (1 - b) + (1 + b) ** 2 * big_l)
    rhs_switch = 2 * l**3 * (1 - b) * (a - b)
    b1_applies = switch >= rhs_switch
    b2_applies = switch < rhs_switch

    lhs1 = (
        4 * al**2
        - l / (a - b) * abs(4 * al * k + (1 + b) ** 2 / (1 - b) * big_l)
        + 2 * al * (1 + b) / (1 - b)
    )
    rhs1 = l**2 * (1 - b * b) * q * big_l / (a - b) ** 2
    b1_holds = lhs1 >= rhs1

    lhs2 = (
        4 * al * l * k
        + (1 + b) / (1 - b) * (l * l * (1 + a) * (1 + b) + l * m * (1 + b) ** 2)
    ) ** 2
    disc = p**2 - (l * l * (1 - a) * (1 - b) + l * m * (1 - b) ** 2) * (
        l * l * (1 + a) * (1 + b) + l * m * (1 + b) ** 2
    )
    rhs2 = 4 * disc * (4 * al**2 + 2 * al * (1 + b) / (1 - b) - (p / (a - b)) ** 2)
    b2_holds = lhs2 <= rhs2

    return _verdict(hyp, b1_applies, b1_holds, b2_applies, b2_holds)


def evaluate_theorem2(
    pair: JanowskiPair,
    alpha: float,
    lam: float,
    *,
    reading: Literal["product", "literal"] = "product",
) -> TheoremReport:
    """All clauses of the second inclusion theorem (3 - 2 sqrt 2 <= B < A).

    The right-hand side of the second branch inequality is typeset with an
    unbalanced bracket. ``reading="product"`` multiplies the full
    discriminant ``P^2 - (1 - B^2) Q L`` by the alpha-factor;
    ``reading="literal"`` multiplies only ``(1 - B^2) Q L`` by it, following
    the operator precedence of the display.

    The two whenever-clauses overlap at equality; both branches are then
    evaluated and either may certify.
    """
    if reading not in ("product", "literal"):
        raise DomainError(f"unknown reading {reading!r}")
    vals, why = _scope(pair, alpha, lam, lambda b: B_SPLIT <= b, "the second inclusion predicate")
    if vals is None:
        return TheoremReport(Certification.OUT_OF_SCOPE, reason=why)
    al, l, m = vals
    a, b = pair.a_param, pair.b_param
    k = l * (a + b) + 2 * m * b
    big_l = l * (1 + a) + m * (1 + b)
    q = l * (1 - a) + m * (1 - b)
    p = l * (1 - a * b) + m * (1 - b * b)
    c_b = 4 * b * (1 - b) / (1 + b) ** 2
    d_b = 8 * b * (1 - b) / (1 + b) ** 3

    hyp = al >= _alpha_bound(a, b, l, m)

    disc = p**2 - (1 - b * b) * q * big_l
    switch_l = (a - b) * abs(al * l * k + c_b * l * big_l)
    switch_r = l * l / 2 * abs(disc)
    b1_applies = switch_l >= switch_r
    b2_applies = switch_l <= switch_r

    y = al * k + c_b * big_l
    lhs1 = al**2 * (a - b) ** 2 - l * (a - b) * abs(y) + al * d_b * (a - b) ** 2
    rhs1 = 0.25 * (l * l * (1 - a) * (1 - b) + l * m * (1 - b) ** 2) * (
        l * l * (1 + a) * (1 + b) + l * m * (1 + b) ** 2
    )
    b1_holds = lhs1 >= rhs1

    factor = al**2 + al * d_b - ((l * l * (1 - a * b) + l * m * (1 - b * b)) / (2 * (a - b))) ** 2
    if reading == "product":
        rhs2 = disc * factor
    else:
        rhs2 = p**2 - (1 - b * b) * q * big_l * factor
    b2_holds = y**2 <= rhs2

    return _verdict(hyp, b1_applies, b1_holds, b2_applies, b2_holds)


def check_theorem1(pair: JanowskiPair, alpha: float, lam: float) -> Certification:
    return evaluate_theorem1(pair, alpha, lam).verdict


def check_theorem2(pair: JanowskiPair, alpha: float, lam: float, **kw) -> Certification:
    return evaluate_theorem2(pair, alpha, lam, **kw).verdict


def certify(pair: JanowskiPair, alpha: float, lam: float) -> Certification:
    """Route to the theorem whose B-range contains ``pair.b_param``.

    At ``B == 3 - 2 sqrt 2`` both theorems apply and either may certify.
    """
    b = pair.b_param
    verdicts = []
    if b <= B_SPLIT:
        verdicts.append(check_theorem1(pair, alpha, lam))
    if b >= B_SPLIT:
        verdicts.append(check_theorem2(pair, alpha, lam))
    if Certification.CERTIFIED in verdicts:
        return Certification.CERTIFIED
    if Certification.NOT_CERTIFIED in verdicts:
        return Certification.NOT_CERTIFIED
    return Certification.OUT_OF_SCOPE


def alpha0_residual(alpha: float) -> float:
    """4 a G(a + 1) - sqrt(pi) G(a + 1/2)."""
    return 4.0 * alpha * math.exp(log_gamma(alpha + 1.0)) - _SQRT_PI * math.exp(log_gamma(alpha + 0.5))


def solve_alpha0(lo: float = 0.01, hi: float = 2.0, tol: float = 1e-12) -> float:
    """Positive root of 4 a G(a + 1) = sqrt(pi) G(a + 1/2), by bisection.

    With lam = 1 the identity reads 2 a M = 1, which is where the
    whenever-clauses of the first theorem switch branches at A = 1, B = -1.
    """
    f_lo, f_hi = alpha0_residual(lo), alpha0_residual(hi)
    if not (f_lo < 0 < f_hi):
        raise NumericalError("alpha0 bracket does not change sign")
    while True:
        mid = 0.5 * (lo + hi)
        f_mid = alpha0_residual(mid)
        if abs(f_mid) < tol or mid in (lo, hi):
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid


# ---------------------------------------------------------------------------
# sampled membership
# ---------------------------------------------------------------------------


class Membership(NamedTuple):
    member: bool
    min_margin: float
    witness: complex


def worst_point(points: np.ndarray, margins: np.ndarray, tie_tol: float = 1e-12) -> tuple[float, complex]:
    """Minimum margin and its point.

    Margins within ``tie_tol * max(1, |min|)`` of the minimum are ties; the
    tie goes to the lexicographically smallest (re, im) point, which keeps
    the witness stable under rounding noise.
    """
    lo = float(np.min(margins))
    near = np.flatnonzero(margins <= lo + tie_tol * max(1.0, abs(lo)))
    cand = points[near]
    pick = near[np.lexsort((cand.imag, cand.real))[0]]
    return lo, complex(points[pick])


def image_membership(f: Callable[[np.ndarray], np.ndarray], pair: JanowskiPair, grid: DiskGrid) -> Membership:
    """Sampled check that ``f`` maps the grid into the target region."""
    pts = grid.points
    margins = target_region(pair).margin(f(pts))
    if not np.all(np.isfinite(margins)):
        raise NumericalError("non-finite value while sampling the image")
    lo, witness = worst_point(pts, margins)
    return Membership(bool(lo > 0), lo, witness)


def numeric_membership(
    params: KernelParams, pair: JanowskiPair, grid: DiskGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> Membership:
    """Sampled check of S_{alpha,lam}(grid) inside the image of (1+Az)/(1+Bz).

    Since the Mobius map is univalent and S(0) = 1 is its value at 0,
    containment of the whole image is equivalent to the subordination; the
    grid only samples it.
    """
    return image_membership(lambda z: eval_series(params, z, cfg), pair, grid)


def hypothesis_gap(
    params: KernelParams, pair: JanowskiPair, grid: DiskGrid, cfg: EvalConfig = DEFAULT_CONFIG
) -> float:
    """min |(1 + B) S - (1 + A)| over the grid; the theorems need it nonzero."""
    s = eval_series(params, grid.points, cfg)
    return float(np.min(np.abs((1 + pair.b_param) * s - (1 + pair.a_param))))


class CloseToConvexProfile(NamedTuple):
    min_real: float
    witness: complex
    identity_residual: float


def close_to_convex_profile(alpha: float, grid: DiskGrid, cfg: EvalConfig = DEFAULT_CONFIG) -> CloseToConvexProfile:
    """Re((z S'_a + 2 a S_a) / (2 a)) on the grid, and its distance to S_{a-1}."""
    if not alpha - 1.0 > -0.5:
        raise DomainError(f"close-to-convexity check needs alpha > 1/2, got {alpha!r}")
    pts = grid.points
    p = KernelParams(alpha, 1.0)
    h = (pts * eval_derivative(p, pts, 1, cfg) + 2 * alpha * eval_series(p, pts, cfg)) / (2 * alpha)
    lower = eval_series(KernelParams(alpha - 1.0, 1.0), pts, cfg)
    lo, witness = worst_point(pts, h.real)
    return CloseToConvexProfile(lo, witness, float(np.max(np.abs(h - lower))))


def check_close_to_convex(
    alpha: float, grid: DiskGrid, cfg: EvalConfig = DEFAULT_CONFIG, *, identity_tol: float = 1e-10
) -> bool:
    """True iff Re((z S'_a + 2 a S_a)/(2 a)) > 0 on every grid point.

    By the kernel recurrence the expression equals S_{a-1}; a pointwise
    mismatch above ``identity_tol`` raises ``NumericalError``. Positivity
    makes z S_a(z) close-to-convex with respect to the identity map.
    """
    prof = close_to_convex_profile(alpha, grid, cfg)
    if prof.identity_residual > identity_tol:
        raise NumericalError(
            f"recurrence identity off by {prof.identity_residual:.3e} (> {identity_tol:.1e})"
        )
    return prof.min_real > 0


# ---------------------------------------------------------------------------
# region scan
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "alpha", "lambda_re", "lambda_im", "A", "B",
    "certified", "numeric_member", "min_margin", "witness_re", "witness_im",
)


@dataclass(frozen=True)
class RegionRecord:
    alpha: float
    lam: complex
    pair: JanowskiPair
    certified: bool
    numeric_member: bool
    min_margin: float
    witness: complex
    error: str | None = None

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "lambda_re": self.lam.real,
            "lambda_im": self.lam.imag,
            "A": self.pair.a_param,
            "B": self.pair.b_param,
            "certified": self.certified,
            "numeric_member": self.numeric_member,
            "min_margin": self.min_margin,
            "witness_re": self.witness.real,
            "witness_im": self.witness.imag,
            "error": self.error,
        }

    def csv_row(self) -> list[str]:
        d = self.as_dict()
        return [_csv_cell(d[c]) for c in CSV_COLUMNS]


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return f"{v:.12g}"


def records_to_csv(records: Iterable[RegionRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def _scan_point(alpha, pair, lam, grid, cfg) -> RegionRecord:
    certified = certify(pair, alpha, lam) is Certification.CERTIFIED
    try:
        res = numeric_membership(KernelParams(alpha, lam), pair, grid, cfg)
    except (ArithmeticError, ValueError) as exc:
        return RegionRecord(alpha, complex(lam), pair, certified, False, math.nan,
                            complex(math.nan, math.nan), f"{type(exc).__name__}: {exc}")
    return RegionRecord(alpha, complex(lam), pair, certified, res.member, res.min_margin, res.witness)


def alpha_samples(lo: float, hi: float, n: int) -> np.ndarray:
    """``n`` equally spaced orders on ``[lo, hi]`` (``lo`` alone when n == 1)."""
    if n < 0:
        raise DomainError("n must be non-negative")
    return np.linspace(lo, hi, n) if n != 1 else np.array([float(lo)])


def scan_region(
    pair: JanowskiPair,
    alpha_range: tuple[float, float, int],
    lam: float,
    grid: DiskGrid,
    cfg: EvalConfig = DEFAULT_CONFIG,
    *,
    workers: int | None = 1,
) -> list[RegionRecord]:
    """One :class:`RegionRecord` per sampled alpha, in increasing alpha order.

    A failure at one point is recorded on that record (``error`` set,
    ``numeric_member`` false) and the scan continues. ``workers`` caps the
    thread pool (``None`` or 0: one per CPU); output order never depends on it.
    """
    lo, hi, n = alpha_range
    if n and not lo > -0.5:
        raise DomainError("alpha range must start above -1/2")
    alphas = [float(a) for a in alpha_samples(lo, hi, int(n))]
    if not workers:
        workers = os.cpu_count() or 1
    if workers == 1 or len(alphas) < 2:
        return [_scan_point(a, pair, lam, grid, cfg) for a in alphas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: _scan_point(a, pair, lam, grid, cfg), alphas))
