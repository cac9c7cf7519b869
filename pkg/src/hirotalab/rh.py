"""Reflectionless Riemann-Hilbert factors, kernel checks, reconstruction,
and direct scattering.

The sectionally analytic factors are assembled from the evolved eigenvector
outer products, deliberately not reusing the bilinear-sum code path of the
soliton evaluator: the two routes share only the phase exponent, which makes
their agreement (reconstruct vs. evaluate) a meaningful cross-check.

The same row/column rescaling trick as in the evaluator keeps every
exponential bounded, exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ComplexField, SpectralData, SystemParams, phase, validate

__all__ = [
    "SIGMA",
    "PoleHitError",
    "NonDecayingTailsError",
    "ScatteringStepError",
    "KernelReport",
    "rh_plus",
    "rh_minus",
    "rh_plus_order1",
    "kernel_report",
    "reconstruct",
    "direct_scattering",
]

SIGMA = np.diag([-1.0, 1.0, 1.0]).astype(complex)

POLE_RADIUS = 1e-12
TAIL_THRESHOLD = 1e-5
PHASE_STEP_LIMIT = 0.1


class PoleHitError(ZeroDivisionError):
    """Evaluation point lies inside the exclusion radius of a pole."""

    def __init__(self, zeta: complex, pole: complex) -> None:
        self.zeta, self.pole = zeta, pole
        super().__init__(f"zeta = {zeta} is within {POLE_RADIUS} of the pole {pole}")


class NonDecayingTailsError(ValueError):
    """Field magnitudes at the grid ends are too large for scattering."""

    def __init__(self, magnitude: float, threshold: float) -> None:
        self.magnitude = magnitude
        super().__init__(
            f"boundary field magnitude {magnitude:.3g} exceeds {threshold:.3g}; widen the grid"
        )


class ScatteringStepError(ValueError):
    """Grid spacing is too coarse for the requested spectral parameter."""

    def __init__(self, h: float, zeta: complex) -> None:
        super().__init__(
            f"need h * |zeta| <= {PHASE_STEP_LIMIT} for phase accuracy, got "
            f"{h * abs(zeta):.3g}"
        )


@dataclass(frozen=True)
class KernelReport:
    """Relative kernel norms per datum: right kernel of the upper factor at
    zeta_j and left kernel of the lower factor at zeta_j*."""

    right_norms: tuple[float, ...]
    left_norms: tuple[float, ...]

    @property
    def max_norm(self) -> float:
        return max(self.right_norms + self.left_norms, default=0.0)


def _scaled_vectors(data: SpectralData, p: SystemParams, x: float, t: float):
    """Columns v_k, rows vhat_j, and the interaction matrix, jointly rescaled.

    Scaling row k and column j by exp(-|Re theta_k| - |Re theta_j|) leaves
    every combination v_k (M^-1)_kj vhat_j invariant while keeping all
    exponentials at non-positive real exponent.
    """
    th = np.array([phase(d, p, x, t) for d in data])
    c = np.abs(th.real)
    vec0 = np.stack([d.vector() for d in data])  # (n, 3) constant vectors
    expo = np.stack([-th - c, th - c, th - c], axis=1)  # sigma-signed evolution
    v = vec0 * np.exp(expo)  # (n, 3), scaled columns v'_k
    vhat = np.conj(v)  # (n, 3), scaled rows vhat'_j = (v_j)^dagger e^{-c_j}
    zetas = data.zetas()
    denom = zetas[None, :] - np.conj(zetas)[:, None]
    gram = vhat @ v.T  # (vhat'_k . v'_j)
    m_scaled = gram / denom
    return v, vhat, m_scaled, zetas


def rh_plus(zeta: complex, data: SpectralData, p: SystemParams, x: float, t: float) -> np.ndarray:
    """Upper-half-plane factor: identity minus the pole sum over zeta_j*."""
    validate(data, p)
    if len(data) == 0:
        return np.eye(3, dtype=complex)
    v, vhat, m_scaled, zetas = _scaled_vectors(data, p, x, t)
    poles = np.conj(zetas)
    nearest = np.abs(zeta - poles).min()
    if nearest < POLE_RADIUS:
        raise PoleHitError(zeta, complex(poles[np.abs(zeta - poles).argmin()]))
    y = vhat / (zeta - poles)[:, None]
    z = np.linalg.solve(m_scaled, y)
    return np.eye(3, dtype=complex) - v.T @ z


def rh_minus(zeta: complex, data: SpectralData, p: SystemParams, x: float, t: float) -> np.ndarray:
    """Lower-half-plane factor: identity plus the pole sum over zeta_k."""
    validate(data, p)
    if len(data) == 0:
        return np.eye(3, dtype=complex)
    v, vhat, m_scaled, zetas = _scaled_vectors(data, p, x, t)
    nearest = np.abs(zeta - zetas).min()
    if nearest < POLE_RADIUS:
        raise PoleHitError(zeta, complex(zetas[np.abs(zeta - zetas).argmin()]))
    z = np.linalg.solve(m_scaled, vhat)
    return np.eye(3, dtype=complex) + (v.T / (zeta - zetas)[None, :]) @ z


def rh_plus_order1(data: SpectralData, p: SystemParams, x: float, t: float) -> np.ndarray:
    """1/zeta coefficient of the upper factor's large-zeta expansion."""
    validate(data, p)
    if len(data) == 0:
        return np.zeros((3, 3), dtype=complex)
    v, vhat, m_scaled, _ = _scaled_vectors(data, p, x, t)
    z = np.linalg.solve(m_scaled, vhat)
    return -(v.T @ z)


def kernel_report(data: SpectralData, p: SystemParams, x: float, t: float) -> KernelReport:
    """Relative norms of the factor-kernel conditions at every eigenvalue."""
    validate(data, p)
    right, left = [], []
    if len(data) == 0:
        return KernelReport((), ())
    v, vhat, _, zetas = _scaled_vectors(data, p, x, t)
    for j, d in enumerate(data):
        p1 = rh_plus(complex(zetas[j]), data, p, x, t)
        r = np.linalg.norm(p1 @ v[j]) / np.linalg.norm(v[j])
        p2 = rh_minus(complex(np.conj(zetas[j])), data, p, x, t)
        l = np.linalg.norm(vhat[j] @ p2) / np.linalg.norm(vhat[j])
        right.append(float(r))
        left.append(float(l))
    return KernelReport(tuple(right), tuple(left))


def reconstruct(data: SpectralData, p: SystemParams, x: float, t: float) -> tuple[complex, complex]:
    """Potentials from the expansion coefficient: (-i/k1) times its (1,2) and
    (1,3) entries."""
    p1 = rh_plus_order1(data, p, x, t)
    return (
        complex(-1j / p.k1 * p1[0, 1]),
        complex(-1j / p.k1 * p1[0, 2]),
    )


def _free_factor(zeta: complex, x: float) -> np.ndarray:
    """Diagonal free-evolution factor exp((i/2) zeta sigma x)."""
    return np.diag(np.exp(0.5j * zeta * np.array([-1.0, 1.0, 1.0]) * x))


def direct_scattering(
    q1: ComplexField,
    q2: ComplexField,
    zeta: complex,
    p: SystemParams,
    tail_threshold: float = TAIL_THRESHOLD,
) -> np.ndarray:
    """Scattering matrix of the sampled potentials at spectral parameter zeta.

    Integrates the 3x3 spectral ODE from the left grid end (initialized to
    the free factor) and reads off S at the right end.  Classical RK4 over
    node pairs, so grid values supply the exact midpoints; accuracy is
    O(h^4).  For zeta off the real axis only the first column of S is
    meaningful; its (1,1) entry extends analytically to the upper half
    plane.
    """
    if q1.grid != q2.grid:
        raise ValueError("fields must share one grid")
    grid = q1.grid
    h = grid.spacing
    if h * abs(zeta) > PHASE_STEP_LIMIT:
        raise ScatteringStepError(h, zeta)
    edge = max(
        abs(q1.values[0]), abs(q1.values[-1]), abs(q2.values[0]), abs(q2.values[-1])
    )
    if edge > tail_threshold:
        raise NonDecayingTailsError(float(edge), tail_threshold)

    n = grid.nx
    coeff = np.zeros((n, 3, 3), dtype=complex)
    coeff[:, 0, 1] = -p.k1 * q1.values
    coeff[:, 0, 2] = -p.k1 * q2.values
    coeff[:, 1, 0] = p.k1 * np.conj(q1.values)
    coeff[:, 2, 0] = p.k1 * np.conj(q2.values)
    diag = 0.5j * zeta * np.array([-1.0, 1.0, 1.0])
    coeff[:, 0, 0] = diag[0]
    coeff[:, 1, 1] = diag[1]
    coeff[:, 2, 2] = diag[2]

    psi = _free_factor(zeta, grid.x_min)
    i = 0
    while i + 2 <= n - 1:
        a0, a1, a2 = coeff[i], coeff[i + 1], coeff[i + 2]
        step = 2.0 * h
        k1m = a0 @ psi
        k2m = a1 @ (psi + 0.5 * step * k1m)
        k3m = a1 @ (psi + 0.5 * step * k2m)
        k4m = a2 @ (psi + step * k3m)
        psi = psi + (step / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        i += 2
    if i == n - 2:
        # odd interval count: one single RK4 step with averaged midpoint
        a0, a1 = coeff[i], coeff[i + 1]
        amid = 0.5 * (a0 + a1)
        k1m = a0 @ psi
        k2m = amid @ (psi + 0.5 * h * k1m)
        k3m = amid @ (psi + 0.5 * h * k2m)
        k4m = a1 @ (psi + h * k3m)
        psi = psi + (h / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)

    return _free_factor(-zeta, grid.x_max) @ psi
