"""
Walker-coin state and single-step evolution for the 1D discrete-time quantum walk.

The joint state lives on a dense lattice of ``2L + 1`` sites, ``x = -L..L``, with a
two-level coin (index 0 = up, 1 = down) at every site. One step applies a coin
matrix at every site and then the coin-flipping shift

    S = sum_x |x-1, up><x, down| + |x+1, down><x, up|

so an up component moves right and becomes down, and a down component moves left
and becomes up. ``L`` is fixed at construction; evolving past it is an error, so
no boundary handling is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "UP",
    "DOWN",
    "InitialStateParams",
    "WalkerCoinState",
    "make_general_coin",
    "make_generalized_hadamard",
    "make_phase_operator",
    "hadamard",
    "fourier",
    "is_unitary",
    "initial_state",
    "step",
    "evolve",
]

UP = 0
DOWN = 1

_TWO_PI = 2.0 * np.pi


def make_general_coin(alpha: float, beta: float, xi: float, zeta: float) -> NDArray[np.complex128]:
    """
    Return the general SU(2) coin with a global phase.

        e^{i beta} [[ e^{i xi} cos(alpha),   e^{i zeta} sin(alpha)],
                    [-e^{-i zeta} sin(alpha), e^{-i xi} cos(alpha)]]

    Angles are periodic, so any real input is accepted.
    """
    alpha, beta, xi, zeta = (np.mod(a, _TWO_PI) for a in (alpha, beta, xi, zeta))
    c, s = np.cos(alpha), np.sin(alpha)
    m = np.array(
        [
            [np.exp(1j * xi) * c, np.exp(1j * zeta) * s],
            [-np.exp(-1j * zeta) * s, np.exp(-1j * xi) * c],
        ],
        dtype=np.complex128,
    )
    return np.exp(1j * beta) * m


def make_generalized_hadamard(omega: float) -> NDArray[np.complex128]:
    """Real reflection coin ``[[cos w, sin w], [sin w, -cos w]]``; ``w = pi/4`` is H."""
    c, s = np.cos(omega), np.sin(omega)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


def make_phase_operator(phi: float) -> NDArray[np.complex128]:
    """``diag(1, e^{-i phi})``; removes the relative phase of an initial coin state."""
    return np.array([[1.0, 0.0], [0.0, np.exp(-1j * phi)]], dtype=np.complex128)


def hadamard() -> NDArray[np.complex128]:
    return np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)


def fourier() -> NDArray[np.complex128]:
    return np.array([[1.0, 1j], [1j, 1.0]], dtype=np.complex128) / np.sqrt(2.0)


def is_unitary(m: NDArray, atol: float = 1e-12) -> bool:
    m = np.asarray(m)
    return m.shape == (2, 2) and np.allclose(m @ m.conj().T, np.eye(2), rtol=0.0, atol=atol)


@dataclass(frozen=True)
class InitialStateParams:
    """Coin angles of a walker localized at the origin.

    ``theta`` must lie in [0, pi] and ``phi`` in [0, 2 pi].
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must be in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi <= _TWO_PI:
            raise ValueError(f"phi must be in [0, 2pi], got {self.phi!r}")

    def coin_spinor(self) -> NDArray[np.complex128]:
        return np.array(
            [np.cos(self.theta / 2.0), np.exp(1j * self.phi) * np.sin(self.theta / 2.0)],
            dtype=np.complex128,
        )


@dataclass(frozen=True)
class WalkerCoinState:
    """
    Joint walker-coin amplitudes on a fixed lattice.

    Attributes
    ----------
    amplitudes : ndarray, shape (2L+1, 2)
        ``amplitudes[x + L, c]`` is the amplitude at position ``x`` with coin ``c``.
    step_count : int
        Number of steps applied since the localized initial state.
    half_width : int
        Lattice half-width ``L``.
    """

    amplitudes: NDArray[np.complex128]
    step_count: int
    half_width: int

    def __post_init__(self) -> None:
        shape = (2 * self.half_width + 1, 2)
        if self.amplitudes.shape != shape:
            raise ValueError(f"amplitudes must have shape {shape}, got {self.amplitudes.shape}")
        if self.step_count > self.half_width:
            raise ValueError("step_count exceeds lattice half-width")

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(-self.half_width, self.half_width + 1)

    def amplitude(self, x: int, coin: int) -> complex:
        return complex(self.amplitudes[x + self.half_width, coin])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    @property
    def remaining_capacity(self) -> int:
        return self.half_width - self.step_count


def initial_state(params: InitialStateParams, half_width: int) -> WalkerCoinState:
    """Localized state ``cos(theta/2)|0,up> + e^{i phi} sin(theta/2)|0,down>``."""
    if half_width < 0:
        raise ValueError(f"half_width must be >= 0, got {half_width}")
    amps = np.zeros((2 * half_width + 1, 2), dtype=np.complex128)
    amps[half_width] = params.coin_spinor()
    return WalkerCoinState(amps, 0, half_width)


def _coin_matrix(coin) -> NDArray[np.complex128]:
    if hasattr(coin, "matrix"):
        return coin.matrix()
    m = np.asarray(coin, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"coin must be a 2x2 matrix, got shape {m.shape}")
    return m


def _shift(amps: NDArray[np.complex128]) -> NDArray[np.complex128]:
    out = np.zeros_like(amps)
    out[:-1, UP] = amps[1:, DOWN]  # (x, down) -> (x-1, up)
    out[1:, DOWN] = amps[:-1, UP]  # (x, up) -> (x+1, down)
    return out


def step(state: WalkerCoinState, coin) -> WalkerCoinState:
    """Apply ``U = S C`` once. ``coin`` is a 2x2 matrix or anything with ``.matrix()``."""
    if state.step_count >= state.half_width:
        raise ValueError(
            f"lattice half-width {state.half_width} exhausted after {state.step_count} steps"
        )
    c = _coin_matrix(coin)
    return WalkerCoinState(_shift(state.amplitudes @ c.T), state.step_count + 1, state.half_width)


def evolve(state: WalkerCoinState, sequence: Iterable) -> WalkerCoinState:
    """Apply ``step`` for each coin of ``sequence`` in order."""
    coins = [_coin_matrix(c) for c in sequence]
    if len(coins) > state.remaining_capacity:
        raise ValueError(
            f"sequence of length {len(coins)} exceeds remaining lattice capacity "
            f"{state.remaining_capacity}"
        )
    amps = state.amplitudes
    for c in coins:
        amps = _shift(amps @ c.T)
    return WalkerCoinState(amps, state.step_count + len(coins), state.half_width)
