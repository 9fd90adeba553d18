"""Piecewise-linear paths in C^n and Gauss-Legendre collocation rules.

Each path segment is subdivided into panels.  On a panel, integrands are
sampled at the Gauss nodes; the collocation rule turns node values of f into
node values (and the endpoint value) of the running integral from the panel
start, by projecting onto the Legendre basis and integrating that exactly.
For analytic integrands the scheme converges spectrally in the rule order,
and the driver doubles the panel count until two successive refinements
agree below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import AccuracyError, DomainError

__all__ = ["QuadratureConfig", "PathSpec", "CollocationRule", "panel_endpoints"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the composite collocation scheme."""

    gauss_order: int = 32
    panels: int = 8
    tol: float = 1e-10
    max_refinements: int = 4
    singularity_margin: float = 1e-8

    def __post_init__(self):
        if self.gauss_order < 2 or self.panels < 1 or self.max_refinements < 0:
            raise DomainError("quadrature settings must be positive")
        if self.tol <= 0:
            raise DomainError("tolerance must be positive")


@dataclass(frozen=True)
class PathSpec:
    """An ordered list of waypoints in C^n, traversed by straight segments."""

    waypoints: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise DomainError("a path needs at least two waypoints")
        dims = {len(p) for p in self.waypoints}
        if len(dims) != 1:
            raise DomainError("waypoints have inconsistent dimensions")

    @classmethod
    def line(cls, start, end) -> "PathSpec":
        start = tuple(complex(z) for z in (start if hasattr(start, "__len__") else (start,)))
        end = tuple(complex(z) for z in (end if hasattr(end, "__len__") else (end,)))
        return cls((start, end))

    @classmethod
    def through(cls, *points) -> "PathSpec":
        pts = tuple(tuple(complex(z) for z in p) for p in points)
        return cls(pts)

    @property
    def dim(self) -> int:
        return len(self.waypoints[0])

    @property
    def start(self) -> tuple[complex, ...]:
        return self.waypoints[0]

    @property
    def end(self) -> tuple[complex, ...]:
        return self.waypoints[-1]

    def segments(self) -> list[tuple[tuple[complex, ...], tuple[complex, ...]]]:
        return list(zip(self.waypoints[:-1], self.waypoints[1:]))

    def to_json(self) -> dict:
        return {"waypoints": [[[z.real, z.imag] for z in p] for p in self.waypoints]}

    @classmethod
    def from_json(cls, obj: dict) -> "PathSpec":
        pts = tuple(
            tuple(complex(re, im) for re, im in p) for p in obj["waypoints"]
        )
        return cls(pts)


def panel_endpoints(path: PathSpec, panels_per_segment: int):
    """Subdivide every segment into equal panels; yields (A, B) point pairs."""
    out = []
    for a, b in path.segments():
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        for k in range(panels_per_segment):
            t0 = k / panels_per_segment
            t1 = (k + 1) / panels_per_segment
            out.append((tuple(a + t0 * (b - a)), tuple(a + t1 * (b - a))))
    return out


class CollocationRule:
    """Gauss-Legendre nodes plus the spectral integration matrices.

    ``nodes``: the order Gauss points on [-1, 1] (ascending).
    ``cum``:   (order x order) matrix, f(nodes) -> values of int_{-1}^{x_k} f.
    ``total``: row vector, f(nodes) -> int_{-1}^{1} f (the Gauss weights).
    """

    def __init__(self, order: int):
        nodes, weights = np.polynomial.legendre.leggauss(order)
        self.order = order
        self.nodes = nodes
        self.total = weights
        # Projection onto Legendre coefficients: c_j = (2j+1)/2 sum_k w_k P_j(x_k) f_k
        vander = np.polynomial.legendre.legvander(nodes, order - 1)  # P_j(x_k)
        proj = ((2 * np.arange(order) + 1) / 2)[:, None] * (vander.T * weights[None, :])
        # Antiderivatives of P_j vanishing at -1, evaluated at the nodes:
        # int P_0 = P_1 + P_0,  int P_j = (P_{j+1} - P_{j-1}) / (2j+1)  (j >= 1).
        anti = np.zeros((order, order))
        big = np.polynomial.legendre.legvander(nodes, order)
        anti[:, 0] = big[:, 1] + big[:, 0]
        for j in range(1, order):
            anti[:, j] = (big[:, j + 1] - big[:, j - 1]) / (2 * j + 1)
        self.cum = anti @ proj


@lru_cache(maxsize=8)
def collocation_rule(order: int) -> CollocationRule:
    return CollocationRule(order)


def min_distance_to_zero(a0: complex, slope: complex) -> float:
    """Minimum of |a0 + slope*t| over t in [0, 1]."""
    if slope == 0:
        return abs(a0)
    t = -np.real(a0 * np.conj(slope)) / abs(slope) ** 2
    t = min(1.0, max(0.0, float(t)))
    return abs(a0 + slope * t)
