"""Particle-number projected BCS (PBCS).

The projector extracts the ``z**p`` component of ``prod_k (u_k + z v_k S+_k)|0>``.
Every matrix element of the projected state reduces to coefficients of the
polynomial ``prod (u_k**2 + z v_k**2)`` taken over the modes that remain after
removing the modes an operator acts on.  With two degenerate levels these
coefficients are finite binomial sums, evaluated here in log space so that
degeneracies of several hundred do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import logsumexp

from .bcs import BcsSolution
from .errors import DegenerateState, IndexOutOfRange
from .model import PairingModel, PairType, check_pair_type
from .xstate import Source, XState

__all__ = [
    "log_binom",
    "ResidueTable",
    "log_residue",
    "residue",
    "PbcsState",
    "project",
    "pbcs_energy",
    "pbcs_rho",
    "pbcs_collective_amplitudes",
]

NEG_INF = -math.inf


@lru_cache(maxsize=65536)
def log_binom(n: int, k: int) -> float:
    """log C(n, k); ``-inf`` outside ``0 <= k <= n``."""
    if k < 0 or k > n or n < 0:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else NEG_INF


def _log_weight(n: int, omega: int, log_u2: float, log_v2: float) -> float:
    """log of v**(2n) u**(2(omega-n)), with 0 * log 0 = 0; ``-inf`` outside ``0 <= n <= omega``."""
    if n < 0 or n > omega:
        return NEG_INF
    out = 0.0
    if n:
        out += n * log_v2
    if omega - n:
        out += (omega - n) * log_u2
    return out


def _lse(terms) -> float:
    terms = [t for t in terms if t != NEG_INF]
    if not terms:
        return NEG_INF
    return float(logsumexp(terms))


class _Level:
    """Degeneracy and log amplitudes of one level."""

    __slots__ = ("omega", "log_u2", "log_v2")

    def __init__(self, omega, u, v):
        self.omega = omega
        self.log_u2 = _log(u * u)
        self.log_v2 = _log(v * v)

    def w(self, n: int) -> float:
        return _log_weight(n, self.omega, self.log_u2, self.log_v2)


def _levels(model: PairingModel, sol: BcsSolution) -> tuple[_Level, _Level]:
    return _Level(model.omega1, sol.u1, sol.v1), _Level(model.omega2, sol.u2, sol.v2)


class ResidueTable:
    """Cache of log residues for one ``(model, solution, p)``.

    ``log(v, excl1, excl2)`` is the log of the coefficient of ``z**(p-v)`` in
    ``(u1**2 + z v1**2)**(omega1-excl1) * (u2**2 + z v2**2)**(omega2-excl2)``.
    All coefficients are non-negative, so only their magnitude is stored;
    a vanishing coefficient is ``-inf``.
    """

    def __init__(self, model: PairingModel, sol: BcsSolution, p: int):
        self.model = model
        self.p = int(p)
        self._lv = _levels(model, sol)
        self._cache: dict[tuple[int, int, int], float] = {}

    def log(self, v: int, excl1: int = 0, excl2: int = 0) -> float:
        key = (v, excl1, excl2)
        if key not in self._cache:
            self._cache[key] = self._compute(v, excl1, excl2)
        return self._cache[key]

    def value(self, v: int, excl1: int = 0, excl2: int = 0) -> float:
        return math.exp(self.log(v, excl1, excl2))

    def _compute(self, v, excl1, excl2):
        l1, l2 = self._lv
        if not (0 <= excl1 <= l1.omega and 0 <= excl2 <= l2.omega):
            raise IndexOutOfRange(f"cannot exclude ({excl1}, {excl2}) modes from levels "
                                  f"of size ({l1.omega}, {l2.omega})")
        m1, m2 = l1.omega - excl1, l2.omega - excl2
        order = self.p - v
        if order < 0 or order > m1 + m2:
            return NEG_INF
        terms = []
        for i in range(max(0, order - m2), min(order, m1) + 1):
            j = order - i
            terms.append(log_binom(m1, i) + _log_weight(i, m1, l1.log_u2, l1.log_v2)
                         + log_binom(m2, j) + _log_weight(j, m2, l2.log_u2, l2.log_v2))
        return _lse(terms)


def log_residue(model: PairingModel, sol: BcsSolution, v: int, excl1: int = 0, excl2: int = 0,
                p: int | None = None) -> float:
    """Log of the projection residue; see :class:`ResidueTable`."""
    return ResidueTable(model, sol, sol.p if p is None else p).log(v, excl1, excl2)


def residue(model: PairingModel, sol: BcsSolution, v: int, excl1: int = 0, excl2: int = 0,
            p: int | None = None) -> float:
    return math.exp(log_residue(model, sol, v, excl1, excl2, p))


@dataclass(frozen=True)
class PbcsState:
    solution: BcsSolution
    p: int
    log_norm: float
    energy: float

    @property
    def norm(self) -> float:
        """<Psi_p|Psi_p> for the unnormalized projected BCS state."""
        return math.exp(self.log_norm)


def pbcs_energy(model: PairingModel, sol: BcsSolution, p: int | None = None) -> float:
    """<Psi_p|H|Psi_p> / <Psi_p|Psi_p>.

    For the pure pairing force the diagonal ``k = k'`` part of the pair-transfer
    sum acts like a one-body term, so it is folded into the ``R(1; k)`` term;
    the remaining transfers ``k != k'`` carry ``u v u' v' R(1; k, k')``.
    """
    p = sol.p if p is None else int(p)
    table = ResidueTable(model, sol, p)
    log_norm = table.log(0)
    if log_norm == NEG_INF:
        raise DegenerateState(f"projected norm vanishes at p={p}")
    (o1, o2), (e1, e2) = model.omegas, model.energies
    g11, g12, g22 = model.couplings
    x1, x2 = sol.v1 ** 2, sol.v2 ** 2
    a1, a2 = sol.u1 * sol.v1, sol.u2 * sol.v2
    # (coefficient, residue key)
    contributions = [
        (o1 * (2.0 * e1 - g11) * x1, (1, 1, 0)),
        (o2 * (2.0 * e2 - g22) * x2, (1, 0, 1)),
        (-g11 * o1 * (o1 - 1) * a1 * a1, (1, 2, 0)),
        (-g22 * o2 * (o2 - 1) * a2 * a2, (1, 0, 2)),
        (-2.0 * g12 * o1 * o2 * a1 * a2, (1, 1, 1)),
    ]
    total = 0.0
    for coef, key in contributions:
        if coef == 0.0 or key[1] > o1 or key[2] > o2:
            continue
        lr = table.log(*key)
        if lr == NEG_INF:
            continue
        total += math.copysign(math.exp(math.log(abs(coef)) + lr - log_norm), coef)
    return total


def project(model: PairingModel, sol: BcsSolution, p: int | None = None) -> PbcsState:
    p = sol.p if p is None else int(p)
    log_norm = ResidueTable(model, sol, p).log(0)
    return PbcsState(sol, p, log_norm, pbcs_energy(model, sol, p))


def _same_level(a: _Level, b: _Level, p: int) -> tuple[float, float, float, float]:
    """Log (unnormalized) rho11, rho22(=rho33=rho23), rho44 with both qubits on level ``a``."""
    def element(shift):
        return _lse(log_binom(a.omega - 2, i - shift) + a.w(i) + log_binom(b.omega, p - i) + b.w(p - i)
                    for i in range(0, p + 1))

    return element(0), element(1), element(2)


def _cross(a: _Level, b: _Level, p: int) -> tuple[float, float, float, float]:
    """Log rho11, rho22, rho33, rho44 with A on level ``a`` and B on level ``b``."""
    oa, ob = a.omega - 1, b.omega - 1
    r = range(0, p + 1)
    l11 = _lse(log_binom(oa, i) + a.w(i) + log_binom(ob, p - i) + b.w(p - i) for i in r)
    l22 = _lse(log_binom(oa, i) + a.w(i) + log_binom(ob, p - i - 1) + b.w(p - i) for i in r)
    l33 = _lse(log_binom(oa, p - i - 1) + a.w(p - i) + log_binom(ob, i) + b.w(i) for i in r)
    l44 = _lse(log_binom(oa, i - 1) + a.w(i) + log_binom(ob, p - i - 1) + b.w(p - i) for i in r)
    return l11, l22, l33, l44


def pbcs_rho(model: PairingModel, sol: BcsSolution, p: int | None, pair_type) -> XState:
    """Two-qubit reduced density matrix of the projected BCS state, normalized to unit trace."""
    t = check_pair_type(model, pair_type)
    p = sol.p if p is None else int(p)
    lower, upper = _levels(model, sol)
    if t is PairType.CROSS:
        l11, l22, l33, l44 = _cross(lower, upper, p)
        l23 = 0.5 * (l22 + l33) if NEG_INF not in (l22, l33) else NEG_INF
    else:
        a, b = (lower, upper) if t is PairType.SAME_LOWER else (upper, lower)
        l11, l22, l44 = _same_level(a, b, p)
        l33 = l23 = l22
    log_trace = _lse([l11, l22, l33, l44])
    if log_trace == NEG_INF:
        raise DegenerateState(f"projected two-qubit state has zero trace at p={p}")

    def nrm(x):
        return 0.0 if x == NEG_INF else math.exp(x - log_trace)

    return XState(nrm(l11), nrm(l22), nrm(l33), nrm(l44), nrm(l23), t, Source.PBCS)


def pbcs_collective_amplitudes(model: PairingModel, sol: BcsSolution, p: int | None = None):
    """Normalized projected BCS state in the basis of symmetric states ``|n1, p - n1>``.

    Returns ``(n1_values, amplitudes)``.  The amplitude of ``|n1, n2>`` is
    proportional to ``sqrt(C(omega1, n1) C(omega2, n2))`` times the product of
    BCS amplitudes of one configuration with that occupation.
    """
    p = sol.p if p is None else int(p)
    lower, upper = _levels(model, sol)
    n1s = list(range(max(0, p - model.omega2), min(p, model.omega1) + 1))
    logs = np.array([0.5 * (log_binom(lower.omega, n1) + lower.w(n1)
                            + log_binom(upper.omega, p - n1) + upper.w(p - n1)) for n1 in n1s])
    if not np.isfinite(logs).any():
        raise DegenerateState(f"projected state vanishes at p={p}")
    amps = np.exp(logs - logs.max())
    return n1s, amps / np.linalg.norm(amps)
