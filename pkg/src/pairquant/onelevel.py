"""Closed forms for a single degenerate level.

With ``p`` pairs and ``q = omega - p`` holes on one level of degeneracy
``omega`` the two-mode state does not depend on the pairing strength.  The
expressions here are written out independently of :mod:`pairquant.xstate`
so that the generic pipeline can be regressed against them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ModelError, PairCountOutOfRange
from .xstate import CorrelationSet, Source, XState

__all__ = [
    "OneLevelParams",
    "OneLevelLimits",
    "one_level_rho",
    "one_level_measures",
    "one_level_limits",
]


@dataclass(frozen=True)
class OneLevelParams:
    omega: int
    p: int

    def __post_init__(self):
        if int(self.omega) != self.omega or self.omega < 2:
            raise ModelError(f"omega must be an integer >= 2, got {self.omega!r}")
        if int(self.p) != self.p or not 0 <= self.p <= self.omega:
            raise PairCountOutOfRange(f"p must lie in [0, {self.omega}], got {self.p!r}")
        object.__setattr__(self, "omega", int(self.omega))
        object.__setattr__(self, "p", int(self.p))

    @property
    def q(self) -> int:
        return self.omega - self.p


def _params(params, p=None) -> OneLevelParams:
    if isinstance(params, OneLevelParams):
        return params
    return OneLevelParams(params, p)


def _xlog2(coef: float, arg: float) -> float:
    """coef * log2(arg), zero whenever the coefficient vanishes."""
    return 0.0 if coef == 0 else coef * math.log2(arg)


def one_level_rho(params, p: int | None = None) -> XState:
    """diag(q(q-1), pq, pq, p(p-1)) / (omega(omega-1)) with coherence pq / (omega(omega-1))."""
    prm = _params(params, p)
    w, p, q = prm.omega, prm.p, prm.q
    d = w * (w - 1)
    return XState(q * (q - 1) / d, p * q / d, p * q / d, p * (p - 1) / d, p * q / d, None, Source.ONELEVEL)


def one_level_measures(params, p: int | None = None) -> CorrelationSet:
    prm = _params(params, p)
    w, p, q = prm.omega, prm.p, prm.q
    d = w * (w - 1)

    conc = 2.0 / d * (p * q - math.sqrt(p * (p - 1) * q * (q - 1)))

    site = _xlog2(p / w, p / w) + _xlog2(q / w, q / w)
    joint = (_xlog2(p * (p - 1) / d, p * (p - 1) / d) + _xlog2(q * (q - 1) / d, q * (q - 1) / d)
             + _xlog2(2 * p * q / d, 2 * p * q / d))
    total = joint - 2.0 * site

    s1 = -(_xlog2(p * q / d, q / (w - 1)) + _xlog2(p * (p - 1) / d, (p - 1) / (w - 1))
           + _xlog2(p * q / d, p / (w - 1)) + _xlog2(q * (q - 1) / d, (q - 1) / (w - 1)))
    theta = math.sqrt((p - q) ** 2 * (w - 1) ** 2 + 4 * p * p * q * q) / d
    theta = min(theta, 1.0)
    lo, hi = 0.5 * (1.0 - theta), 0.5 * (1.0 + theta)
    bits = _xlog2(lo, lo) + _xlog2(hi, hi)
    s2 = -bits

    classical = bits - site
    disc = joint - site - bits
    return CorrelationSet(conc, total, classical, disc, s1, s2, theta, "S2" if s2 <= s1 else "S1")


@dataclass(frozen=True)
class OneLevelLimits:
    omega: int
    i_max: float
    c_max: float
    d_max: float

    i_limit = 0.5
    c_limit = 0.75 * math.log2(3.0) - 1.0
    d_limit = 1.5 - 0.75 * math.log2(3.0)

    @property
    def concurrence_limit(self) -> float:
        """Concurrence for ``1 << p << omega`` (equal to its value at half filling)."""
        return 1.0 / (self.omega - 1)

    def total(self, p: float) -> float:
        """Mutual information for ``p << omega``."""
        return 2.0 * p / self.omega

    def classical(self, p: float) -> float:
        """Classical correlation for ``p << omega``; second order in ``x = p / omega``.

        Expanding ``theta = 1 - 2x + 2x**2 + O(x**3)`` inside ``S2`` gives
        ``C = -x**2 log2 x``; the first-order term cancels against ``S(A)``.
        """
        x = p / self.omega
        return -x * x * math.log2(x) if x > 0 else 0.0

    def discord(self, p: float) -> float:
        """Discord for ``p << omega``: the total correlation minus :meth:`classical`."""
        x = p / self.omega
        return 2.0 * x + (x * x * math.log2(x) if x > 0 else 0.0)


def one_level_limits(omega: int) -> OneLevelLimits:
    """Maxima of the correlations (reached at ``p = omega / 2``) and small-``p`` asymptotes."""
    if omega < 3:
        raise ModelError("the maxima formulas need omega >= 3")
    w = float(omega)
    a, b = (w - 2) / (w - 1), (3 * w - 2) / (w - 1)
    i_max = math.log2(a) + w / (2 * (w - 1)) * math.log2(2 * w / (w - 2))
    c_max = 0.25 * (a * math.log2(a) + b * math.log2(b)) - 1.0
    d_max = 0.25 * (b * math.log2((w - 2) / (3 * w - 2)) + 2 * w / (w - 1) * math.log2(2 * w / (w - 2))) + 1.0
    return OneLevelLimits(int(omega), i_max, c_max, d_max)
