"""
Momentum-space description of the walk and the long-time limit of the universal sequence.

A walker starting at the origin has the same coin spinor at every quasi-momentum
``k``, and one step acts on it as the 2x2 matrix ``S_k C`` with
``S_k = e^{ik}|up><down| + e^{-ik}|down><up|``. The reduced coin state after ``n``
steps is therefore the momentum average

    rho_n = (1/2pi) int_{-pi}^{pi} L_k^n rho_0 dk

where ``L_k`` is the 4x4 real matrix of ``rho -> (S_k C) rho (S_k C)^dagger`` on
Bloch 4-vectors. The integrand is a trigonometric polynomial in ``k``, so the
uniform periodic trapezoid rule is exact once the node count exceeds twice the
number of steps.

Frame: the 4x4 matrices here are written in the ``sigma_y = [[0, -i], [i, 0]]``
frame, whereas :class:`~qwalk.entanglement.BlochState` uses the opposite y
orientation. Vectors are reflected (``a2 -> -a2``) on the way in and out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

from .entanglement import BlochState, schmidt_norm_from_bloch_norm
from .walk import InitialStateParams

__all__ = [
    "AsymptoticResult",
    "MIN_QUADRATURE",
    "superoperator_H",
    "superoperator_F",
    "superoperator_HF",
    "coin_superoperator",
    "hf_limit_projector",
    "hf_eigenvalues",
    "momentum_nodes",
    "asymptotic_matrix",
    "closed_form_asymptotic_matrix",
    "closed_form_schmidt",
    "asymptotic_reduced_state",
    "momentum_space_evolution",
]

MIN_QUADRATURE = 64

# reflection between the BlochState frame and the superoperator frame
_REFLECT_Y = np.diag([1.0, 1.0, -1.0, 1.0])

_PAULI_STD = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


def superoperator_H(k: float) -> NDArray[np.float64]:
    """Bloch-space action of one Hadamard step at momentum ``k``."""
    s, c = np.sin(2 * k), np.cos(2 * k)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, s, c],
            [0.0, 0.0, c, -s],
            [0.0, -1.0, 0.0, 0.0],
        ]
    )


def superoperator_F(k: float) -> NDArray[np.float64]:
    """Bloch-space action of one Fourier step at momentum ``k``."""
    s, c = np.sin(2 * k), np.cos(2 * k)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, c, 0.0, -s],
            [0.0, -s, 0.0, -c],
            [0.0, 0.0, 1.0, 0.0],
        ]
    )


def superoperator_HF(k: float) -> NDArray[np.float64]:
    """Closed form of ``superoperator_F(k) @ superoperator_H(k)`` (H first, then F)."""
    s, c = np.sin(2 * k), np.cos(2 * k)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, s, s * c, c * c],
            [0.0, c, -s * s, -s * c],
            [0.0, 0.0, c, -s],
        ]
    )


def coin_superoperator(coin: NDArray, k: float) -> NDArray[np.float64]:
    """Bloch-space matrix of ``rho -> U rho U^dagger`` with ``U = S_k coin``.

    Built directly from the coin, so it serves as a cross-check of the closed
    forms above and extends the momentum picture to any 2x2 coin.
    """
    shift = np.array([[0.0, np.exp(1j * k)], [np.exp(-1j * k), 0.0]])
    u = shift @ np.asarray(coin, dtype=np.complex128)
    out = np.empty((4, 4))
    for j, pj in enumerate(_PAULI_STD):
        image = u @ pj @ u.conj().T
        for i, pi in enumerate(_PAULI_STD):
            out[i, j] = np.trace(image @ pi).real / 2.0
    return out


def hf_eigenvalues(k: float) -> NDArray[np.complex128]:
    """Predicted spectrum ``{1, 1, e^{i(g+pi)}, e^{-i(g+pi)}}`` with ``cos g = (1 + sin^2 2k)/2``."""
    g = np.arccos((1.0 + np.sin(2 * k) ** 2) / 2.0)
    return np.array([1.0, 1.0, np.exp(1j * (g + np.pi)), np.exp(-1j * (g + np.pi))])


def hf_limit_projector(k: float) -> NDArray[np.float64]:
    """
    Non-oscillating part of ``superoperator_HF(k)^m`` for large ``m``.

    The 3x3 Bloch block of ``L^{HF}_k`` is a rotation; its fixed axis is

        v1 = cos 2k / sqrt(4 - (sin^2 2k + 1)^2) * (1 + sin 2k, cos 2k, 1 - sin 2k)

    and the oscillating eigencomponents average out under the momentum
    integral, leaving the projector ``1 (+) v1 v1^T``. Since
    ``4 - (s^2 + 1)^2 = (1 - s^2)(3 + s^2)`` and ``1 - s^2 = cos^2 2k``, the block
    equals ``u u^T / (3 + s^2)`` with ``u = (1 + s, cos 2k, 1 - s)``; that form is
    used so the points ``sin^2 2k = 1`` take their continuous limit.
    """
    s, c = np.sin(2 * k), np.cos(2 * k)
    u = np.array([1.0 + s, c, 1.0 - s])
    out = np.zeros((4, 4))
    out[0, 0] = 1.0
    out[1:, 1:] = np.outer(u, u) / (3.0 + s * s)
    return out


def momentum_nodes(n_quadrature: int) -> NDArray[np.float64]:
    """Equispaced nodes on [-pi, pi); equal weights ``1/n`` give the periodic trapezoid rule."""
    if n_quadrature < MIN_QUADRATURE:
        raise ValueError(f"n_quadrature must be >= {MIN_QUADRATURE}, got {n_quadrature}")
    return -np.pi + 2.0 * np.pi * np.arange(n_quadrature) / n_quadrature


def asymptotic_matrix(n_quadrature: int = 512) -> NDArray[np.float64]:
    """Momentum average of ``superoperator_F(k) @ hf_limit_projector(k)``."""
    ks = momentum_nodes(n_quadrature)
    total = np.zeros((4, 4))
    for k in ks:
        total += superoperator_F(k) @ hf_limit_projector(k)
    return total / n_quadrature


def closed_form_asymptotic_matrix() -> NDArray[np.float64]:
    r3 = np.sqrt(3.0)
    p = -1.0 + 2.0 / r3
    q = 2.0 - r3
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, p, q],
            [0.0, -q, -p, 0.0],
            [0.0, 0.0, p, 0.0],
        ]
    )


def closed_form_schmidt() -> float:
    """Limit Schmidt norm of the universal sequence, about 0.9908 * sqrt(2)."""
    half = (2.0 - np.sqrt(3.0)) / 2.0
    return float(np.sqrt(0.5 + half) + np.sqrt(0.5 - half))


def _initial_bloch(theta: float, phi: float) -> NDArray[np.float64]:
    params = InitialStateParams(theta, phi)
    return 0.5 * np.array(
        [
            1.0,
            np.cos(params.phi) * np.sin(params.theta),
            -np.sin(params.phi) * np.sin(params.theta),
            np.cos(params.theta),
        ]
    )


@dataclass(frozen=True)
class AsymptoticResult:
    bloch: BlochState
    schmidt: float
    closed_form_schmidt: float


def asymptotic_reduced_state(theta: float, phi: float = 0.0, n_quadrature: int = 512) -> AsymptoticResult:
    """Reduced coin state after ``[(H, F)^m, F]`` in the limit ``m -> infinity``."""
    m = asymptotic_matrix(n_quadrature)
    vec = _REFLECT_Y @ m @ _REFLECT_Y @ _initial_bloch(theta, phi)
    bloch = BlochState(*(float(v) for v in vec))
    return AsymptoticResult(bloch, schmidt_norm_from_bloch_norm(bloch.norm), closed_form_schmidt())


def momentum_space_evolution(
    sequence: Sequence, theta: float, phi: float = 0.0, n_quadrature: int = 512
) -> BlochState:
    """Reduced coin Bloch state after an H/F ``sequence``, computed in momentum space."""
    kinds = [getattr(c, "kind", None) for c in sequence]
    if any(kind not in ("H", "F") for kind in kinds):
        raise ValueError("momentum-space evolution supports only H and F coins")
    ks = momentum_nodes(n_quadrature)
    rho0 = _REFLECT_Y @ _initial_bloch(theta, phi)
    acc = np.zeros(4)
    for k in ks:
        lh, lf = superoperator_H(k), superoperator_F(k)
        v = rho0
        for kind in kinds:
            v = (lh if kind == "H" else lf) @ v
        acc += v
    vec = _REFLECT_Y @ (acc / n_quadrature)
    return BlochState(*(float(x) for x in vec))
