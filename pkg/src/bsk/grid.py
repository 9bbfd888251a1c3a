"""Deterministic samples of the open unit disk."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class DiskGrid:
    """Radial-angular product grid with every point inside ``|z| <= 1 - eps``.

    Radii are ``(1 - eps) * sin(pi k / (2 n_r))`` for ``k = 1..n_r``, which
    clusters them toward the rim where extremal values of the maps of
    interest sit. Angles are uniform, starting at 0.
    """

    n_r: int = 64
    n_theta: int = 128
    margin_eps: float = 1e-3

    def __post_init__(self) -> None:
        if self.n_r < 1 or self.n_theta < 1:
            raise DomainError("grid needs at least one radius and one angle")
        if not 0.0 < self.margin_eps < 1.0:
            raise DomainError(f"margin_eps must lie in (0, 1), got {self.margin_eps!r}")

    @cached_property
    def radii(self) -> np.ndarray:
        k = np.arange(1, self.n_r + 1)
        r = (1.0 - self.margin_eps) * np.sin(0.5 * math.pi * k / self.n_r)
        r[-1] = 1.0 - self.margin_eps
        return r

    @cached_property
    def angles(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_theta) / self.n_theta

    @cached_property
    def points(self) -> np.ndarray:
        """Flattened points, radius-major."""
        return (self.radii[:, None] * np.exp(1j * self.angles)[None, :]).ravel()

    def __len__(self) -> int:
        return self.n_r * self.n_theta
