"""Correlation measures for two-qubit X states with a vanishing 14-coherence.

Basis order is ``|00>, |01>, |10>, |11>`` with the first digit labelling
qubit A; ``1`` means the pair mode is occupied.  All logarithms are base 2.

The closed forms below are written for a general real coherence
``rho23 <= sqrt(rho22 rho33)``.  When the coherence is saturated
(``rho23**2 == rho22 * rho33``, which holds for every projected-BCS and
one-level state) they reduce term by term to the textbook expressions in
which ``sqrt(rho22 rho33)`` replaces ``|rho23|``.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidState
from .model import PairType

__all__ = [
    "Source",
    "XState",
    "CorrelationSet",
    "concurrence",
    "wootters_concurrence",
    "entropy",
    "mutual_information",
    "conditional_entropies",
    "classical_correlation",
    "discord",
    "clamp_events",
]

ZERO_CUTOFF = 1e-15
NEGATIVE_SLACK = 1e-12
TRACE_TOL = 1e-10


class Source(str, enum.Enum):
    BCS = "bcs"
    PBCS = "pbcs"
    EXACT = "exact"
    ONELEVEL = "one-level"


_clamp_lock = threading.Lock()
_clamp_count = 0


def clamp_events() -> int:
    """Number of slightly negative inputs clamped to zero so far in this process."""
    return _clamp_count


def _nonneg(x: float) -> float:
    global _clamp_count
    if x < 0.0:
        if x < -NEGATIVE_SLACK:
            raise InvalidState(f"negative probability {x!r}")
        with _clamp_lock:
            _clamp_count += 1
        return 0.0
    return x


def _plog(x: float) -> float:
    """x log2 x with 0 log 0 = 0."""
    return x * math.log2(x) if x > ZERO_CUTOFF else 0.0


def _h(probs) -> float:
    return -sum(_plog(x) for x in probs)


@dataclass(frozen=True)
class XState:
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    rho23: float = 0.0
    tag: PairType | None = None
    source: Source | None = None

    def check(self, tol: float = TRACE_TOL) -> "XState":
        """Raise :class:`InvalidState` unless trace, positivity and coherence bounds hold."""
        diag = (self.rho11, self.rho22, self.rho33, self.rho44)
        if not all(math.isfinite(x) for x in diag + (self.rho23,)):
            raise InvalidState(f"non-finite entries in {self}")
        if min(diag) < -NEGATIVE_SLACK:
            raise InvalidState(f"negative diagonal entry in {self}")
        if abs(sum(diag) - 1.0) > tol:
            raise InvalidState(f"trace {sum(diag)!r} differs from 1")
        if self.rho23 ** 2 > self.rho22 * self.rho33 + NEGATIVE_SLACK:
            raise InvalidState("coherence exceeds sqrt(rho22 rho33); state is not positive")
        return self

    @classmethod
    def from_matrix(cls, m, tag=None, source=None, atol: float = 1e-12) -> "XState":
        m = np.asarray(m)
        mask = np.ones((4, 4), bool)
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)):
            mask[i, j] = False
        if np.abs(m[mask]).max() > atol:
            raise InvalidState("matrix is not of the X form with rho14 = 0")
        if abs(m[1, 2].imag) > atol or abs(m[1, 2] - np.conj(m[2, 1])) > atol:
            raise InvalidState("coherence must be real and Hermitian")
        return cls(float(m[0, 0].real), float(m[1, 1].real), float(m[2, 2].real), float(m[3, 3].real),
                   float(m[1, 2].real), tag, source)

    def matrix(self) -> np.ndarray:
        m = np.diag([self.rho11, self.rho22, self.rho33, self.rho44])
        m[1, 2] = m[2, 1] = self.rho23
        return m

    @property
    def diagonal(self) -> tuple[float, float, float, float]:
        return (self.rho11, self.rho22, self.rho33, self.rho44)

    def eigenvalues(self) -> tuple[float, float, float, float]:
        mid = 0.5 * (self.rho22 + self.rho33)
        rad = math.hypot(0.5 * (self.rho22 - self.rho33), self.rho23)
        return (self.rho11, self.rho44, mid + rad, mid - rad)

    def marginal_a(self) -> tuple[float, float]:
        """(P(A empty), P(A occupied))."""
        return (self.rho11 + self.rho22, self.rho33 + self.rho44)

    def marginal_b(self) -> tuple[float, float]:
        return (self.rho11 + self.rho33, self.rho22 + self.rho44)

    def swap_qubits(self) -> "XState":
        return replace(self, rho22=self.rho33, rho33=self.rho22)

    def particle_hole(self) -> "XState":
        """Relabel empty <-> occupied on both qubits."""
        return replace(self, rho11=self.rho44, rho44=self.rho11)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.rho11, self.rho22, self.rho33, self.rho44, self.rho23)


@dataclass(frozen=True)
class CorrelationSet:
    concurrence: float
    mutual_info: float
    classical: float
    discord: float
    s1: float
    s2: float
    theta: float
    branch: str

    def as_dict(self) -> dict:
        return {
            "concurrence": self.concurrence,
            "mutual_info": self.mutual_info,
            "classical": self.classical,
            "discord": self.discord,
            "s1": self.s1,
            "s2": self.s2,
            "theta": self.theta,
            "branch": self.branch,
        }


def concurrence(rho: XState) -> float:
    """2 max(0, |rho23| - sqrt(rho11 rho44))."""
    r11, r44 = _nonneg(rho.rho11), _nonneg(rho.rho44)
    return max(0.0, 2.0 * abs(rho.rho23) - 2.0 * math.sqrt(r11 * r44))


_SYSY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def wootters_concurrence(rho) -> float:
    """Concurrence of an arbitrary two-qubit density matrix from the spin-flipped state.

    Uses the square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``
    in descending order.
    """
    m = rho.matrix() if isinstance(rho, XState) else np.asarray(rho, dtype=complex)
    flipped = _SYSY @ m.conj() @ _SYSY
    lam = np.linalg.eigvals(m @ flipped).real
    s = np.sort(np.sqrt(np.clip(lam, 0.0, None)))[::-1]
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def entropy(rho: XState) -> float:
    """Von Neumann entropy of the two-qubit state."""
    return _h(_nonneg(x) for x in rho.eigenvalues())


def mutual_information(rho: XState) -> float:
    """S(rho_A) + S(rho_B) - S(rho)."""
    return _h(rho.marginal_a()) + _h(rho.marginal_b()) - entropy(rho)


def conditional_entropies(rho: XState) -> tuple[float, float, float]:
    """Post-measurement conditional entropies ``(S1, S2, theta)`` for measurements on B.

    ``S1`` follows a measurement of B in the occupation basis; ``S2`` one in the
    equatorial basis, where ``theta`` is the Bloch-vector length of the
    conditional state of A.
    """
    r11, r22, r33, r44 = (_nonneg(x) for x in rho.diagonal)
    b0, b1 = r11 + r33, r22 + r44
    s1 = 0.0
    if b0 > 0.0:
        s1 -= _plog(r11) + _plog(r33) - _plog(b0)
    if b1 > 0.0:
        s1 -= _plog(r22) + _plog(r44) - _plog(b1)
    theta = math.sqrt((r11 + r22 - r33 - r44) ** 2 + 4.0 * rho.rho23 ** 2)
    theta = min(theta, 1.0)
    s2 = _h((0.5 * (1.0 - theta), 0.5 * (1.0 + theta)))
    return s1, s2, theta


def classical_correlation(rho: XState) -> tuple[float, str]:
    """Classical correlation for von Neumann measurements on B, and the minimizing branch."""
    s1, s2, _ = conditional_entropies(rho)
    branch = "S1" if s1 < s2 else "S2"
    return _h(rho.marginal_a()) - min(s1, s2), branch


def discord(rho: XState, side: str = "B") -> CorrelationSet:
    """All correlation measures, with the measurement performed on qubit ``side``."""
    if side not in ("A", "B"):
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    state = rho.swap_qubits() if side == "A" else rho
    s1, s2, theta = conditional_entropies(state)
    total = mutual_information(state)
    classical = _h(state.marginal_a()) - min(s1, s2)
    return CorrelationSet(
        concurrence=concurrence(state),
        mutual_info=total,
        classical=classical,
        discord=total - classical,
        s1=s1,
        s2=s2,
        theta=theta,
        branch="S1" if s1 < s2 else "S2",
    )
