"""Assembly of the 3x3 Lax matrices and the zero-curvature compatibility check.

Jets of candidate solutions come from finite differences of the analytic
evaluator, never from symbolic differentiation, so the convergence-order
test absorbs the differencing error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SpectralData, SystemParams
from .nsoliton import _fields_batch

__all__ = [
    "FieldJet",
    "build_U",
    "build_V",
    "jet_at",
    "zero_curvature_residual",
    "default_zeta_samples",
]

_SIGMA_DIAG = np.array([-1.0, 1.0, 1.0])


@dataclass(frozen=True)
class FieldJet:
    """Point values of both fields and their first two x-derivatives."""

    q1: complex
    q2: complex
    q1x: complex
    q2x: complex
    q1xx: complex
    q2xx: complex


def build_U(jet: FieldJet, zeta: complex, p: SystemParams) -> np.ndarray:
    """Space part (i/2) zeta sigma - k1 Q with the antisymmetric potential Q."""
    q1, q2 = jet.q1, jet.q2
    mat = np.array(
        [
            [0.0, q1, q2],
            [-np.conj(q1), 0.0, 0.0],
            [-np.conj(q2), 0.0, 0.0],
        ],
        dtype=complex,
    )
    return 0.5j * zeta * np.diag(_SIGMA_DIAG).astype(complex) - p.k1 * mat


def build_V(jet: FieldJet, zeta: complex, p: SystemParams) -> np.ndarray:
    """Time part, cubic in zeta, with all nine zeroth-order entries.

    The (2,3) zeroth-order entry uses the conjugated first derivative of q1,
    which is what the compatibility condition forces; with it the whole
    zeta^0 block closes consistently.
    """
    eps, k1, a2 = p.epsilon, p.k1, p.a2
    q1, q2 = jet.q1, jet.q2
    q1x, q2x = jet.q1x, jet.q2x
    q1xx, q2xx = jet.q1xx, jet.q2xx
    c1, c2 = np.conj(q1), np.conj(q2)
    c1x, c2x = np.conj(q1x), np.conj(q2x)
    dens = (q1 * c1 + q2 * c2).real

    cubic = 0.5j * eps * zeta**3 * np.diag([1.0, -1.0, -1.0]).astype(complex)

    quad = zeta**2 * np.array(
        [
            [a2, eps * k1 * q1, eps * k1 * q2],
            [-eps * k1 * c1, -a2, 0.0],
            [-eps * k1 * c2, 0.0, -a2],
        ],
        dtype=complex,
    )

    lin = zeta * np.array(
        [
            [
                -1j * eps * k1**2 * dens,
                1j * eps * k1 * q1x - 2j * a2 * k1 * q1,
                1j * eps * k1 * q2x - 2j * a2 * k1 * q2,
            ],
            [
                1j * eps * k1 * c1x + 2j * a2 * k1 * c1,
                1j * eps * k1**2 * q1 * c1,
                1j * eps * k1**2 * c1 * q2,
            ],
            [
                1j * eps * k1 * c2x + 2j * a2 * k1 * c2,
                1j * eps * k1**2 * c2 * q1,
                1j * eps * k1**2 * q2 * c2,
            ],
        ],
        dtype=complex,
    )

    b = np.empty((3, 3), dtype=complex)
    b[0, 0] = -2 * a2 * k1**2 * dens - eps * k1**2 * (q1 * c1x - c1 * q1x + q2 * c2x - c2 * q2x)
    b[0, 1] = -eps * k1 * q1xx + 2 * a2 * k1 * q1x - 2 * eps * k1**3 * q1 * dens
    b[0, 2] = -eps * k1 * q2xx + 2 * a2 * k1 * q2x - 2 * eps * k1**3 * q2 * dens
    b[1, 0] = eps * k1 * np.conj(q1xx) + 2 * a2 * k1 * c1x + 2 * eps * k1**3 * c1 * dens
    b[1, 1] = -eps * k1**2 * (c1 * q1x - c1x * q1) + 2 * a2 * k1**2 * q1 * c1
    b[1, 2] = -eps * k1**2 * (c1 * q2x - c1x * q2) + 2 * a2 * k1**2 * c1 * q2
    b[2, 0] = eps * k1 * np.conj(q2xx) + 2 * a2 * k1 * c2x + 2 * eps * k1**3 * c2 * dens
    b[2, 1] = -eps * k1**2 * (c2 * q1x - q1 * c2x) + 2 * a2 * k1**2 * c2 * q1
    b[2, 2] = -eps * k1**2 * (c2 * q2x - c2x * q2) + 2 * a2 * k1**2 * q2 * c2

    return cubic + quad + lin + b


def jet_at(
    data: SpectralData, p: SystemParams, x: float, t: float, h: float, order: int = 2
) -> FieldJet:
    """Jet of the analytic solution at (x, t) by central differences in x."""
    if order == 2:
        offs = np.array([-1.0, 0.0, 1.0])
    elif order == 4:
        offs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    else:
        raise ValueError("order must be 2 or 4")
    q1, q2 = _fields_batch(data, p, x + h * offs, t)
    if order == 2:
        d1 = np.array([-0.5, 0.0, 0.5]) / h
        d2 = np.array([1.0, -2.0, 1.0]) / h**2
        mid = 1
    else:
        d1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12 * h)
        d2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12 * h**2)
        mid = 2
    return FieldJet(
        q1=complex(q1[mid]),
        q2=complex(q2[mid]),
        q1x=complex(d1 @ q1),
        q2x=complex(d1 @ q2),
        q1xx=complex(d2 @ q1),
        q2xx=complex(d2 @ q2),
    )


def zero_curvature_residual(
    data: SpectralData,
    p: SystemParams,
    zeta: complex,
    x: float,
    t: float,
    h: float,
    order: int = 2,
) -> np.ndarray:
    """U_t - V_x + [U, V] on the analytic solution, by finite differences.

    For exact solutions the sup norm decreases at the stencil's nominal
    order under h-refinement.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if order == 2:
        offs = [-1.0, 1.0]
        wts = np.array([-0.5, 0.5]) / h
    elif order == 4:
        offs = [-2.0, -1.0, 1.0, 2.0]
        wts = np.array([1.0, -8.0, 8.0, -1.0]) / (12 * h)
    else:
        raise ValueError("order must be 2 or 4")

    u_t = np.zeros((3, 3), dtype=complex)
    for o, w in zip(offs, wts):
        u_t += w * build_U(jet_at(data, p, x, t + o * h, h, order), zeta, p)
    v_x = np.zeros((3, 3), dtype=complex)
    for o, w in zip(offs, wts):
        v_x += w * build_V(jet_at(data, p, x + o * h, t, h, order), zeta, p)

    jet0 = jet_at(data, p, x, t, h, order)
    u0 = build_U(jet0, zeta, p)
    v0 = build_V(jet0, zeta, p)
    return u_t - v_x + u0 @ v0 - v0 @ u0


def default_zeta_samples() -> list[complex]:
    """Eight points on |zeta| = 0.8 plus 0.3 + 0.2i and 1.5 (ten in total)."""
    ring = [0.8 * np.exp(2j * np.pi * k / 8) for k in range(8)]
    return [complex(z) for z in ring] + [0.3 + 0.2j, 1.5 + 0.0j]
