"""Univalent target maps q with q(0) = 0 for dominance and admissibility checks.

Each target evaluates itself and its first three derivatives on arrays.
Closed-form targets differentiate exactly; :class:`FunctionTarget` falls
back to Richardson-extrapolated central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError


class Target:
    #: boundary points where q blows up
    exceptional: tuple[complex, ...] = ()

    def __call__(self, z):
        raise NotImplementedError

    def derivative(self, z, order: int):
        raise NotImplementedError

    def dilated(self, r: float) -> "DilatedTarget":
        """q_r(z) = q(r z)."""
        return DilatedTarget(self, r)


@dataclass(frozen=True)
class PolynomialTarget(Target):
    """q(z) = sum_k coeffs[k] z^k; identity is ``(0, 1)``."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        c = tuple(complex(v) for v in self.coeffs)
        if not c:
            raise DomainError("polynomial target needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def derivative(self, z, order: int):
        c = np.polynomial.polynomial.polyder(np.asarray(self.coeffs), order)
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), c)


def identity_target(scale: complex = 1.0) -> PolynomialTarget:
    return PolynomialTarget((0.0, scale))


@dataclass(frozen=True)
class MobiusTarget(Target):
    """(1 + A z)/(1 + B z) - 1 = (A - B) z / (1 + B z), shifted so q(0) = 0."""

    a_param: float
    b_param: float

    def __post_init__(self) -> None:
        if not (-1.0 <= self.b_param < self.a_param <= 1.0):
            raise DomainError("need -1 <= B < A <= 1")

    @property
    def exceptional(self) -> tuple[complex, ...]:
        b = self.b_param
        return (complex(-1.0 / b),) if abs(b) == 1.0 else ()

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a_param - self.b_param) * z / (1.0 + self.b_param * z)

    def derivative(self, z, order: int):
        z = np.asarray(z, dtype=complex)
        a, b = self.a_param, self.b_param
        fact = (1.0, 1.0, 2.0, 6.0)[order]
        return fact * (a - b) * (-b) ** (order - 1) / (1.0 + b * z) ** (order + 1)


@dataclass(frozen=True)
class FunctionTarget(Target):
    """Arbitrary vectorised callable; derivatives by finite differences.

    Central differences at steps ``h`` and ``h/2`` combined by one
    Richardson step (error O(h^4)).
    """

    func: Callable
    step: float = 1e-3
    exceptional: tuple[complex, ...] = ()

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=complex)

    def _central(self, z, order: int, h: float):
        f = self.__call__
        if order == 1:
            return (f(z + h) - f(z - h)) / (2 * h)
        if order == 2:
            return (f(z + h) - 2 * f(z) + f(z - h)) / (h * h)
        return (f(z + 2 * h) - 2 * f(z + h) + 2 * f(z - h) - f(z - 2 * h)) / (2 * h**3)

    def derivative(self, z, order: int):
        z = np.asarray(z, dtype=complex)
        coarse = self._central(z, order, self.step)
        fine = self._central(z, order, self.step / 2)
        return (4 * fine - coarse) / 3


@dataclass(frozen=True)
class DilatedTarget(Target):
    base: Target
    radius: float

    def __post_init__(self) -> None:
        if not 0.0 < self.radius < 1.0:
            raise DomainError("dilation radius must lie in (0, 1)")

    def __call__(self, z):
        return self.base(self.radius * np.asarray(z, dtype=complex))

    def derivative(self, z, order: int):
        return self.radius**order * self.base.derivative(self.radius * np.asarray(z, dtype=complex), order)

