"""
Coin-walker entanglement: reduced coin density matrix, Bloch vector, Schmidt norm.

Bloch components are defined by ``rho = a0 I + a1 sx + a2 sy' + a3 sz`` with the
y axis oriented as ``sy' = [[0, i], [-i, 0]]``. With this orientation the localized
initial state ``(theta, phi)`` has ``a2 = -sin(phi) sin(theta) / 2`` and the
five-step universal sequence ends at ``(cos(theta), sin(theta), 0) / 16``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from .walk import WalkerCoinState

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "BlochState",
    "SchmidtPair",
    "reduced_coin_density",
    "bloch_vector",
    "density_from_bloch",
    "schmidt_norm",
    "schmidt_norm_from_bloch_norm",
    "schmidt_coefficients",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

_CLAMP = 1e-12


class BlochState(NamedTuple):
    a0: float
    a1: float
    a2: float
    a3: float

    @property
    def vector(self) -> NDArray[np.float64]:
        return np.array([self.a1, self.a2, self.a3])

    @property
    def norm(self) -> float:
        """Length of the (a1, a2, a3) part."""
        return float(np.sqrt(self.a1**2 + self.a2**2 + self.a3**2))

    def as_array(self) -> NDArray[np.float64]:
        return np.array(self, dtype=np.float64)


class SchmidtPair(NamedTuple):
    lambda1: float
    lambda2: float

    @property
    def total(self) -> float:
        return self.lambda1 + self.lambda2


def reduced_coin_density(state: WalkerCoinState | NDArray) -> NDArray[np.complex128]:
    """``rho[c, c'] = sum_x psi(x, c) conj(psi(x, c'))``.

    Accepts a state or a raw ``(sites, 2)`` amplitude array.
    """
    psi = state.amplitudes if isinstance(state, WalkerCoinState) else np.asarray(state)
    return psi.T @ psi.conj()


def bloch_vector(rho: NDArray) -> BlochState:
    rho = np.asarray(rho)
    return BlochState(
        float(np.trace(rho).real / 2.0),
        float(np.trace(rho @ SIGMA_X).real / 2.0),
        float(np.trace(rho @ SIGMA_Y).real / 2.0),
        float(np.trace(rho @ SIGMA_Z).real / 2.0),
    )


def density_from_bloch(b: BlochState) -> NDArray[np.complex128]:
    return b.a0 * np.eye(2) + b.a1 * SIGMA_X + b.a2 * SIGMA_Y + b.a3 * SIGMA_Z


def schmidt_norm_from_bloch_norm(alpha_norm: float) -> float:
    """``sqrt(1/2 + |a|) + sqrt(1/2 - |a|)``, clamping round-off at the product-state edge."""
    return float(np.sqrt(max(0.5 + alpha_norm, 0.0)) + np.sqrt(max(0.5 - alpha_norm, 0.0)))


def schmidt_norm(state: WalkerCoinState | NDArray) -> float:
    """Sum of the two Schmidt coefficients; 1 for product states, sqrt(2) at most."""
    return schmidt_norm_from_bloch_norm(bloch_vector(reduced_coin_density(state)).norm)


def schmidt_coefficients(state: WalkerCoinState | NDArray) -> SchmidtPair:
    """
    Schmidt coefficients of the position/coin bipartition.

    The eigenvalues of the 2x2 reduced density matrix are ``a0 +- |a|``; the
    coefficients are their square roots, largest first.
    """
    b = bloch_vector(reduced_coin_density(state))
    r = b.norm
    hi, lo = b.a0 + r, b.a0 - r
    if lo < -_CLAMP:
        raise ValueError(f"reduced density matrix is not positive (eigenvalue {lo})")
    return SchmidtPair(float(np.sqrt(hi)), float(np.sqrt(max(lo, 0.0))))
