"""
Named coin sequences and their evaluation over families of initial states.

Sequences are tuples of :class:`Coin` labels. The text form used on the command
line mirrors the usual shorthand, e.g. ``"F,H^7,F,H^6"`` or ``"GH(0.5)^2,F"``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from . import walk

__all__ = [
    "Coin",
    "H",
    "F",
    "CoinSequence",
    "SequenceEvaluation",
    "SequenceParseError",
    "generalized_hadamard",
    "custom_coin",
    "universal_sequence",
    "generalized_universal_sequence",
    "phase_compensated_sequence",
    "parse_sequence",
    "format_sequence",
    "resolve",
    "basis_evolution",
    "schmidt_norms",
    "evaluate_sequence",
]


@dataclass(frozen=True)
class Coin:
    """A coin label. ``kind`` is one of H, F, GH, HZ, FZ, custom."""

    kind: str
    param: float | None = None
    entries: tuple[complex, complex, complex, complex] | None = None

    def matrix(self) -> NDArray[np.complex128]:
        return _matrix(self.kind, self.param, self.entries).copy()

    def __str__(self) -> str:
        if self.kind in ("H", "F"):
            return self.kind
        if self.kind == "custom":
            return "custom"
        return f"{self.kind}({self.param!r})"


@lru_cache(maxsize=4096)
def _matrix(kind, param, entries) -> NDArray[np.complex128]:
    if kind == "H":
        m = walk.hadamard()
    elif kind == "F":
        m = walk.fourier()
    elif kind == "GH":
        m = walk.make_generalized_hadamard(param)
    elif kind == "HZ":
        m = walk.hadamard() @ walk.make_phase_operator(param)
    elif kind == "FZ":
        m = walk.fourier() @ walk.make_phase_operator(param)
    elif kind == "custom":
        m = np.array(entries, dtype=np.complex128).reshape(2, 2)
    else:
        raise ValueError(f"unknown coin kind {kind!r}")
    m.flags.writeable = False
    return m


H = Coin("H")
F = Coin("F")

CoinSequence = tuple[Coin, ...]


def generalized_hadamard(omega: float) -> Coin:
    return Coin("GH", float(omega))


def custom_coin(matrix: NDArray) -> Coin:
    m = np.asarray(matrix, dtype=np.complex128)
    if not walk.is_unitary(m):
        raise ValueError("custom coin matrix is not unitary")
    return Coin("custom", entries=tuple(complex(z) for z in m.ravel()))


def resolve(seq: Iterable[Coin]) -> list[NDArray[np.complex128]]:
    return [c.matrix() for c in seq]


def universal_sequence(m: int) -> CoinSequence:
    """``[(H, F)^m, F]``, length ``2m + 1``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (H, F) * m + (F,)


def generalized_universal_sequence(m: int, omega: float) -> CoinSequence:
    """``[(GH(omega), F)^m, F]``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return (generalized_hadamard(omega), F) * m + (F,)


def phase_compensated_sequence(seq: Sequence[Coin], phi: float) -> CoinSequence:
    """Replace every H by ``H Z(phi)`` and every F by ``F Z(phi)``.

    Evolving the initial state (theta, phi) with the result gives the same final
    state as evolving (theta, 0) with ``seq``.
    """
    bad = [str(c) for c in seq if c.kind not in ("H", "F")]
    if bad:
        raise ValueError(f"phase compensation needs an H/F sequence, got {bad}")
    if np.mod(phi, 2.0 * np.pi) == 0.0:
        return tuple(seq)
    return tuple(Coin(c.kind + "Z", float(phi)) for c in seq)


class SequenceParseError(ValueError):
    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"(?P<kind>GH|HZ|FZ|H|F)(?:\((?P<param>{_FLOAT})\))?(?:\^(?P<rep>\d+))?"
)
_SEP = re.compile(r"[\s,]*")


def parse_sequence(text: str) -> CoinSequence:
    """
    Parse a coin-sequence string.

    Tokens are ``H``, ``F``, ``GH(w)``, ``HZ(phi)`` and ``FZ(phi)``, each optionally
    followed by ``^k``; separators (commas, whitespace) are optional.

    Raises
    ------
    SequenceParseError
        On a malformed token; ``position`` is the offending character offset.
    """
    coins: list[Coin] = []
    pos = _SEP.match(text, 0).end()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SequenceParseError(text, pos, f"unexpected {text[pos]!r}")
        kind, param, rep = m.group("kind", "param", "rep")
        needs_param = kind in ("GH", "HZ", "FZ")
        if needs_param and param is None:
            raise SequenceParseError(text, m.end(), f"{kind} needs a parenthesized angle")
        if not needs_param and param is not None:
            raise SequenceParseError(text, m.start("param") - 1, f"{kind} takes no angle")
        coin = Coin(kind, float(param)) if needs_param else Coin(kind)
        coins.extend([coin] * (int(rep) if rep is not None else 1))
        end = m.end()
        pos = _SEP.match(text, end).end()
        if pos == end and pos < len(text) and text[pos] in "^(":
            raise SequenceParseError(text, pos, f"unexpected {text[pos]!r}")
    return tuple(coins)


def format_sequence(seq: Iterable[Coin]) -> str:
    """Comma-separated text with runs collapsed to ``X^k``; inverse of :func:`parse_sequence`."""
    parts: list[str] = []
    prev, run = None, 0
    for c in list(seq) + [None]:
        if c == prev:
            run += 1
            continue
        if prev is not None:
            if prev.kind == "custom":
                raise ValueError("custom coins have no text form")
            parts.append(str(prev) if run == 1 else f"{prev}^{run}")
        prev, run = c, 1
    return ",".join(parts)


@dataclass(frozen=True)
class SequenceEvaluation:
    per_theta: list[tuple[float, float]]
    mean: float
    variance: float
    samples: int


def basis_evolution(seq: Sequence) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Final amplitudes of ``|0,up>`` and ``|0,down>`` after ``seq``.

    The walk is linear, so any localized initial state evolves to the matching
    combination of these two arrays.
    """
    n = len(seq)
    out = []
    for coin in (walk.UP, walk.DOWN):
        amps = np.zeros((2 * n + 1, 2), dtype=np.complex128)
        amps[n, coin] = 1.0
        out.append(walk.evolve(walk.WalkerCoinState(amps, 0, n), seq).amplitudes)
    return out[0], out[1]


def schmidt_norms(
    basis: tuple[NDArray, NDArray], thetas: NDArray, phis: NDArray | float = 0.0
) -> NDArray[np.float64]:
    """Schmidt norm for every (theta, phi) from a precomputed :func:`basis_evolution`."""
    psi_up, psi_down = basis
    thetas = np.asarray(thetas, dtype=np.float64)
    phis = np.broadcast_to(np.asarray(phis, dtype=np.float64), thetas.shape)
    u = np.cos(thetas / 2.0)
    d = np.exp(1j * phis) * np.sin(thetas / 2.0)
    # reduced density of u*psi_up + d*psi_down via the 2x2 Gram blocks
    g_uu = psi_up.T @ psi_up.conj()
    g_ud = psi_up.T @ psi_down.conj()
    g_dd = psi_down.T @ psi_down.conj()
    rho = (
        (np.abs(u) ** 2)[:, None, None] * g_uu
        + (u * d.conj())[:, None, None] * g_ud
        + (d * u.conj())[:, None, None] * g_ud.conj().T
        + (np.abs(d) ** 2)[:, None, None] * g_dd
    )
    a1 = rho[:, 0, 1].real
    a2 = rho[:, 0, 1].imag
    a3 = (rho[:, 0, 0].real - rho[:, 1, 1].real) / 2.0
    r = np.sqrt(a1**2 + a2**2 + a3**2)
    return np.sqrt(np.clip(0.5 + r, 0.0, None)) + np.sqrt(np.clip(0.5 - r, 0.0, None))


def evaluate_sequence(seq: Sequence, thetas: Iterable[float], phi: float = 0.0) -> SequenceEvaluation:
    """Schmidt norm after ``seq`` for each initial angle, with mean and population variance."""
    thetas = np.asarray(list(thetas), dtype=np.float64)
    if thetas.size == 0:
        raise ValueError("need at least one theta")
    if len(seq) == 0:
        raise ValueError("sequence is empty")
    for t in thetas:
        walk.InitialStateParams(float(t), phi)
    values = schmidt_norms(basis_evolution(seq), thetas, phi)
    return SequenceEvaluation(
        per_theta=[(float(t), float(v)) for t, v in zip(thetas, values)],
        mean=float(np.mean(values)),
        variance=float(np.var(values)),
        samples=int(thetas.size),
    )

