"""Mean-field BCS for the two-level pairing model.

All pair modes of a level share one amplitude pair ``(u_i, v_i)``.  The
occupations ``x_i = v_i**2`` satisfy

    x_i = 1/2 (1 + s * et_i / sqrt(et_i**2 + delta_i**2))
    et_i = eps_i - g_ii x_i - lam            (self-energy shift optional)
    delta_i = sum_j g_ij omega_j u_j v_j

with ``s = -1`` for the textbook root and ``s = +1`` for the opposite
assignment of the two quadratic roots.  Both are solved and the one with the
lower energy at the prescribed particle number is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import ConvergenceFailure, NoSuperfluidSolution
from .model import PairingModel, PairType, check_pair_type, validate
from .xstate import Source, XState

__all__ = ["BcsSolution", "solve_bcs", "bcs_branches", "bcs_energy", "bcs_two_qubit_state"]

GAP_FLOOR = 1e-10


@dataclass(frozen=True)
class BcsSolution:
    p: int
    u1: float
    v1: float
    u2: float
    v2: float
    lam: float
    delta1: float
    delta2: float
    eps_tilde1: float
    eps_tilde2: float
    energy: float
    n_expect: float
    branch: int = -1
    superfluid: bool = True
    iterations: int = 0
    residual: float = 0.0
    hartree: bool = True
    model: PairingModel | None = field(default=None, compare=False, repr=False)

    @property
    def occupations(self) -> tuple[float, float]:
        return (self.v1 * self.v1, self.v2 * self.v2)

    def amplitudes(self, level: int) -> tuple[float, float]:
        return (self.u1, self.v1) if level == 0 else (self.u2, self.v2)

    def grand_energy(self) -> float:
        """<H - lam N>."""
        return self.energy - self.lam * self.n_expect

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "u1": self.u1,
            "v1": self.v1,
            "u2": self.u2,
            "v2": self.v2,
            "lambda": self.lam,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "eps_tilde1": self.eps_tilde1,
            "eps_tilde2": self.eps_tilde2,
            "energy": self.energy,
            "n_expect": self.n_expect,
            "branch": self.branch,
            "superfluid": self.superfluid,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def bcs_energy(model: PairingModel, x1: float, x2: float) -> float:
    """<BCS|H|BCS> for level occupations ``x_i = v_i**2``."""
    (o1, o2), (e1, e2) = model.omegas, model.energies
    g11, g12, g22 = model.couplings
    a1 = math.sqrt(max(x1 * (1.0 - x1), 0.0))
    a2 = math.sqrt(max(x2 * (1.0 - x2), 0.0))
    one_body = o1 * (2.0 * e1 - g11) * x1 + o2 * (2.0 * e2 - g22) * x2
    # k != k' pair transfer; the k == k' terms are the -g_kk v_k^2 above
    transfer = (g11 * o1 * o1 * a1 * a1 + g22 * o2 * o2 * a2 * a2 + 2.0 * g12 * o1 * o2 * a1 * a2
                - g11 * o1 * a1 * a1 - g22 * o2 * a2 * a2)
    return one_body - transfer


def _occ(et: float, delta: float, sign: int) -> float:
    quasi = math.hypot(et, delta)
    if quasi == 0.0:
        return 0.5
    return 0.5 * (1.0 + sign * et / quasi)


def _gaps(model, x1, x2):
    g11, g12, g22 = model.couplings
    o1, o2 = model.omegas
    a1 = math.sqrt(max(x1 * (1.0 - x1), 0.0))
    a2 = math.sqrt(max(x2 * (1.0 - x2), 0.0))
    return g11 * o1 * a1 + g12 * o2 * a2, g12 * o1 * a1 + g22 * o2 * a2


def _shifted(model, x1, x2, hartree):
    g11, _, g22 = model.couplings
    e1, e2 = model.energies
    if hartree:
        return e1 - g11 * x1, e2 - g22 * x2
    return e1, e2


def _chemical_potential(model, h1, h2, d1, d2, p, sign):
    """Root of omega1 x1(lam) + omega2 x2(lam) = p for frozen shifts and gaps."""
    o1, o2 = model.omegas

    def excess(lam):
        return o1 * _occ(h1 - lam, d1, sign) + o2 * _occ(h2 - lam, d2, sign) - p

    width = abs(h1) + abs(h2) + abs(d1) + abs(d2) + 1.0
    lo, hi = min(h1, h2) - width, max(h1, h2) + width
    # rising = +1 when the occupation grows with lam (the s = -1 root)
    rising = -sign
    for _ in range(200):
        f_lo, f_hi = excess(lo), excess(hi)
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if rising * f_lo > 0.0:
            lo -= width
        elif rising * f_hi < 0.0:
            hi += width
        else:
            break
        width *= 2.0
    else:
        raise ConvergenceFailure("could not bracket the chemical potential")
    return brentq(excess, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)


def _normal_solution(model, p, hartree, branch, iterations=0):
    o1, o2 = model.omegas
    if model.eps1 == model.eps2:
        x1 = x2 = p / model.n_modes
    else:
        x1 = min(1.0, p / o1)
        x2 = (p - o1 * x1) / o2
    return _finish(model, p, x1, x2, lam=_normal_lambda(model, x1, x2, hartree), hartree=hartree,
                   branch=branch, superfluid=False, iterations=iterations, residual=0.0)


def _normal_lambda(model, x1, x2, hartree):
    h1, h2 = _shifted(model, x1, x2, hartree)
    if 0.0 < x2 < 1.0 or x1 == 0.0:
        return h2 if x2 > 0.0 else h1
    return h1 if x1 < 1.0 else h2


def _finish(model, p, x1, x2, lam, hartree, branch, superfluid, iterations, residual):
    o1, o2 = model.omegas
    d1, d2 = _gaps(model, x1, x2)
    h1, h2 = _shifted(model, x1, x2, hartree)
    return BcsSolution(
        p=p,
        u1=math.sqrt(1.0 - x1),
        v1=math.sqrt(x1),
        u2=math.sqrt(1.0 - x2),
        v2=math.sqrt(x2),
        lam=lam,
        delta1=d1,
        delta2=d2,
        eps_tilde1=h1 - lam,
        eps_tilde2=h2 - lam,
        energy=bcs_energy(model, x1, x2),
        n_expect=2.0 * (o1 * x1 + o2 * x2),
        branch=branch,
        superfluid=superfluid,
        iterations=iterations,
        residual=residual,
        hartree=hartree,
        model=model,
    )


def _solve_branch(model, p, sign, hartree, tol, max_iter, damping):
    o1, o2 = model.omegas
    x1 = x2 = p / model.n_modes
    for it in range(1, max_iter + 1):
        d1, d2 = _gaps(model, x1, x2)
        h1, h2 = _shifted(model, x1, x2, hartree)
        lam = _chemical_potential(model, h1, h2, d1, d2, p, sign)
        n1, n2 = _occ(h1 - lam, d1, sign), _occ(h2 - lam, d2, sign)
        step = max(abs(n1 - x1), abs(n2 - x2))
        x1 += damping * (n1 - x1)
        x2 += damping * (n2 - x2)
        if step < tol:
            break
    else:
        raise ConvergenceFailure(f"gap equations did not converge in {max_iter} iterations (p={p})")
    # undamped re-evaluation fixes lam and measures the self-consistency residual
    d1, d2 = _gaps(model, x1, x2)
    h1, h2 = _shifted(model, x1, x2, hartree)
    lam = _chemical_potential(model, h1, h2, d1, d2, p, sign)
    n1, n2 = _occ(h1 - lam, d1, sign), _occ(h2 - lam, d2, sign)
    residual = max(abs(n1 - x1), abs(n2 - x2))
    # restore the particle number exactly; the fixed point only holds it to ~tol
    shift = (p - o1 * x1 - o2 * x2) / model.n_modes
    x1, x2 = min(max(x1 + shift, 0.0), 1.0), min(max(x2 + shift, 0.0), 1.0)
    if max(d1, d2) < GAP_FLOOR:
        return None, it
    return _finish(model, p, x1, x2, lam, hartree, sign, True, it, residual), it


def bcs_branches(model: PairingModel, occ, *, hartree: bool = True, tol: float = 1e-14,
                 max_iter: int = 100_000, damping: float = 0.5) -> tuple[BcsSolution, BcsSolution]:
    """Self-consistent solutions for both root assignments, ``(s=-1, s=+1)``."""
    p = validate(model, occ).p
    out = []
    for sign in (-1, 1):
        if p == 0 or p == model.n_modes or max(model.couplings) == 0.0:
            out.append(_normal_solution(model, p, hartree, sign))
            continue
        sol, it = _solve_branch(model, p, sign, hartree, tol, max_iter, damping)
        out.append(sol if sol is not None else _normal_solution(model, p, hartree, sign, it))
    return tuple(out)


def solve_bcs(model: PairingModel, occ, *, hartree: bool = True, strict: bool = False,
              tol: float = 1e-14, max_iter: int = 100_000, damping: float = 0.5) -> BcsSolution:
    """Lowest-energy BCS solution with ``<N> = 2p``.

    The outer loop is a damped (``damping``) fixed-point iteration on the level
    occupations; inside every step the chemical potential is found by a
    bracketed root search, for which the particle number is monotone.
    ``hartree=False`` drops the ``-g_ii v_i**2`` self-energy from the shifted
    energies.  If the gap collapses the normal solution is returned with
    ``superfluid=False``, or :class:`NoSuperfluidSolution` is raised when
    ``strict`` is set.
    """
    lower, upper = bcs_branches(model, occ, hartree=hartree, tol=tol, max_iter=max_iter,
                                damping=damping)
    best = lower if lower.energy <= upper.energy else upper
    trivial = best.p in (0, model.n_modes)
    if strict and not best.superfluid and not trivial:
        raise NoSuperfluidSolution(f"gap collapsed to zero at p={best.p}")
    return best


def bcs_two_qubit_state(sol: BcsSolution, pair_type) -> XState:
    """Two-mode reduced state of the BCS product wave function."""
    t = PairType.parse(pair_type)
    if sol.model is not None:
        check_pair_type(sol.model, t)
    la, lb = t.levels
    ua, va = sol.amplitudes(la)
    ub, vb = sol.amplitudes(lb)
    ua2, va2, ub2, vb2 = ua * ua, va * va, ub * ub, vb * vb
    return XState(ua2 * ub2, ua2 * vb2, va2 * ub2, va2 * vb2, 0.0, t, Source.BCS)
