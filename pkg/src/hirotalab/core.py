"""Domain types, validation, and the shared phase exponent.

Everything here is immutable after construction and every operation is a
pure function, so all of it is safe to evaluate concurrently on shared data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SystemParams",
    "SpectralDatum",
    "SpectralData",
    "Grid1D",
    "ComplexField",
    "ValidationError",
    "ZeroK1Error",
    "NonUpperHalfPlaneZeroError",
    "DuplicateZeroError",
    "ZeroEigenvectorError",
    "phase",
    "validate",
    "trapezoid_mass",
]


class ValidationError(ValueError):
    """A domain invariant does not hold for the supplied inputs."""


class ZeroK1Error(ValidationError):
    """k1 == 0; it divides every field-reconstruction formula."""

    def __init__(self) -> None:
        super().__init__("k1 must be a nonzero finite real")


class NonUpperHalfPlaneZeroError(ValidationError):
    """A discrete eigenvalue lies outside the open upper half plane."""

    def __init__(self, index: int, zeta: complex) -> None:
        self.index = index
        self.zeta = zeta
        super().__init__(
            f"spectral datum {index}: Im(zeta) must be > 0, got zeta = {zeta}"
        )


class DuplicateZeroError(ValidationError):
    """Two discrete eigenvalues coincide; only simple zeros are supported."""

    def __init__(self, i: int, j: int) -> None:
        self.indices = (i, j)
        super().__init__(f"spectral data {i} and {j} share the same zeta")


class ZeroEigenvectorError(ValidationError):
    """The constant vector attached to an eigenvalue is identically zero."""

    def __init__(self, index: int) -> None:
        self.index = index
        super().__init__(f"spectral datum {index}: (alpha, beta, gamma) must be nonzero")


@dataclass(frozen=True)
class SystemParams:
    """The three real constants of the coupled system.

    epsilon scales the third-order dispersion terms, a2 the second-order
    ones, and k1 the nonlinearity (k1 != 0).
    """

    epsilon: float
    k1: float
    a2: float


@dataclass(frozen=True)
class SpectralDatum:
    """One discrete eigenvalue zeta in C+ with its constant vector (alpha, beta, gamma)."""

    zeta: complex
    alpha: complex
    beta: complex
    gamma: complex

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma], dtype=complex)


@dataclass(frozen=True)
class SpectralData:
    """Ordered collection of spectral data; all matrix indexing follows this order."""

    data: tuple[SpectralDatum, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", tuple(self.data))

    def __len__(self) -> int:
        return len(self.data)

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, i: int) -> SpectralDatum:
        return self.data[i]

    def zetas(self) -> np.ndarray:
        return np.array([d.zeta for d in self.data], dtype=complex)


@dataclass(frozen=True)
class Grid1D:
    """Uniform closed-interval grid with nx nodes from x_min to x_max."""

    x_min: float
    x_max: float
    nx: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError("grid requires x_min < x_max")
        if self.nx < 2:
            raise ValidationError("grid requires nx >= 2")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)


@dataclass(frozen=True, eq=False)
class ComplexField:
    """One complex-valued field sampled on a grid at a fixed time."""

    grid: Grid1D
    t: float
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.shape[0] != self.grid.nx:
            raise ValidationError(
                f"field must hold exactly nx = {self.grid.nx} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("field values must all be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def phase(d: SpectralDatum, p: SystemParams, x, t):
    """Phase exponent (i/2) zeta x - ((i/2) zeta^3 epsilon + zeta^2 a2) t.

    Accepts scalar or ndarray x and t (broadcast together); linear in each
    variable with the other held fixed.
    """
    z = d.zeta
    return 0.5j * z * np.asarray(x) - (0.5j * z**3 * p.epsilon + z**2 * p.a2) * np.asarray(t)


def validate(data: SpectralData, p: SystemParams) -> None:
    """Check every domain invariant; raise a named error for the first violation.

    Raises ZeroK1Error, NonUpperHalfPlaneZeroError(index),
    DuplicateZeroError(i, j), or ZeroEigenvectorError(index).
    """
    for name in ("epsilon", "k1", "a2"):
        v = getattr(p, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ValidationError(f"parameter {name} must be a finite real, got {v!r}")
    if p.k1 == 0.0:
        raise ZeroK1Error()
    for i, d in enumerate(data):
        entries = [d.zeta, d.alpha, d.beta, d.gamma]
        if not all(math.isfinite(complex(e).real) and math.isfinite(complex(e).imag) for e in entries):
            raise ValidationError(f"spectral datum {i} contains a non-finite entry")
        if not complex(d.zeta).imag > 0.0:
            raise NonUpperHalfPlaneZeroError(i, complex(d.zeta))
        if d.alpha == 0 and d.beta == 0 and d.gamma == 0:
            raise ZeroEigenvectorError(i)
    zs = [complex(d.zeta) for d in data]
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if zs[i] == zs[j]:
                raise DuplicateZeroError(i, j)


def trapezoid_mass(q1: ComplexField, q2: ComplexField) -> float:
    """Trapezoid quadrature of |q1|^2 + |q2|^2 over the common grid."""
    if q1.grid != q2.grid:
        raise ValidationError("fields must share one grid")
    density = np.abs(q1.values) ** 2 + np.abs(q2.values) ** 2
    return float(np.trapezoid(density, dx=q1.grid.spacing))
