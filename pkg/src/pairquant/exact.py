"""Exact ground state of the two-level pairing Hamiltonian.

Fully paired states that are symmetric within each level are labelled by the
pair numbers ``|n1, n2>`` with ``n1 + n2 = p``.  The quasi-spin algebra of each
level gives

    S+ S- |n>  = n (omega - n + 1) |n>
    S+    |n>  = sqrt((n + 1)(omega - n)) |n + 1>

so the Hamiltonian is tridiagonal in ``n1``.  A brute-force Fock-space oracle
(one bit per pair mode) is included to certify the collective construction
on small systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .bcs import BcsSolution
from .errors import ConvergenceFailure, TooLarge
from .model import PairingModel, PairType, check_pair_type, validate
from .xstate import Source, XState

__all__ = [
    "QuasiSpinBasis",
    "TridiagonalHamiltonian",
    "ExactState",
    "build_hamiltonian",
    "ground_state",
    "solve_exact",
    "exact_rho",
    "collective_rho",
    "FockSpace",
    "fock_oracle",
    "fock_projected_bcs",
    "fock_rho",
    "FOCK_LIMIT",
]

FOCK_LIMIT = 100_000


@dataclass(frozen=True)
class QuasiSpinBasis:
    omega1: int
    omega2: int
    p: int

    @property
    def n1_values(self) -> range:
        return range(max(0, self.p - self.omega2), min(self.p, self.omega1) + 1)

    @property
    def dim(self) -> int:
        return len(self.n1_values)

    def states(self) -> list[tuple[int, int]]:
        return [(n1, self.p - n1) for n1 in self.n1_values]


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    model: PairingModel
    basis: QuasiSpinBasis
    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def dense(self) -> np.ndarray:
        h = np.diag(self.diagonal)
        if len(self.offdiagonal):
            h += np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)
        return h


@dataclass(frozen=True)
class ExactState:
    hamiltonian: TridiagonalHamiltonian
    energy: float
    amplitudes: np.ndarray = field(repr=False)

    @property
    def basis(self) -> QuasiSpinBasis:
        return self.hamiltonian.basis

    @property
    def model(self) -> PairingModel:
        return self.hamiltonian.model

    @property
    def p(self) -> int:
        return self.basis.p

    def residual(self) -> float:
        h = self.hamiltonian.dense()
        return float(np.abs(h @ self.amplitudes - self.energy * self.amplitudes).max())


def build_hamiltonian(model: PairingModel, occ) -> TridiagonalHamiltonian:
    p = validate(model, occ).p
    o1, o2 = model.omegas
    e1, e2 = model.energies
    g11, g12, g22 = model.couplings
    basis = QuasiSpinBasis(o1, o2, p)
    n1 = np.array(basis.n1_values, dtype=float)
    n2 = p - n1
    diag = 2.0 * e1 * n1 + 2.0 * e2 * n2 - g11 * n1 * (o1 - n1 + 1) - g22 * n2 * (o2 - n2 + 1)
    # <n1+1, n2-1| S+(1) S-(2) |n1, n2>
    m1, m2 = n1[:-1], n2[:-1]
    off = -g12 * np.sqrt((m1 + 1) * (o1 - m1)) * np.sqrt(m2 * (o2 - m2 + 1))
    return TridiagonalHamiltonian(model, basis, diag, off)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(vec) > 1e-300)
    if len(nz) and vec[nz[-1]] < 0:
        return -vec
    return vec


def ground_state(h: TridiagonalHamiltonian) -> ExactState:
    """Lowest eigenpair; the amplitude with the largest ``n1`` is made positive."""
    if h.basis.dim == 1:
        return ExactState(h, float(h.diagonal[0]), np.ones(1))
    try:
        w, v = scipy.linalg.eigh_tridiagonal(h.diagonal, h.offdiagonal, select="i", select_range=(0, 0))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"tridiagonal eigensolver failed: {exc}") from exc
    vec = v[:, 0] / np.linalg.norm(v[:, 0])
    return ExactState(h, float(w[0]), _fix_phase(vec))


def solve_exact(model: PairingModel, occ) -> ExactState:
    return ground_state(build_hamiltonian(model, occ))


def collective_rho(omega1: int, omega2: int, p: int, n1_values, amplitudes, pair_type,
                   source: Source = Source.EXACT) -> XState:
    """Two-qubit state of any superposition of symmetric states ``|n1, p - n1>``."""
    t = PairType.parse(pair_type)
    n1 = np.asarray(list(n1_values), dtype=float)
    c = np.asarray(amplitudes, dtype=float)
    w = c * c / np.sum(c * c)
    n2 = p - n1
    if t is PairType.CROSS:
        norm = omega1 * omega2
        r11 = w @ ((omega1 - n1) * (omega2 - n2)) / norm
        r22 = w @ ((omega1 - n1) * n2) / norm
        r33 = w @ (n1 * (omega2 - n2)) / norm
        r44 = w @ (n1 * n2) / norm
        m1, m2 = n1[:-1], n2[:-1]
        hop = np.sqrt((m1 + 1) * (omega1 - m1)) * np.sqrt(m2 * (omega2 - m2 + 1))
        cn = c / np.sqrt(np.sum(c * c))
        r23 = float(np.sum(cn[:-1] * cn[1:] * hop)) / norm
    else:
        n, omega = (n1, omega1) if t is PairType.SAME_LOWER else (n2, omega2)
        norm = omega * (omega - 1)
        r11 = w @ ((omega - n) * (omega - n - 1)) / norm
        r22 = r33 = r23 = w @ (n * (omega - n)) / norm
        r44 = w @ (n * (n - 1)) / norm
    return XState(float(r11), float(r22), float(r33), float(r44), float(r23), t, source)


def exact_rho(state: ExactState, pair_type) -> XState:
    """Reduced density matrix of two pair modes in the exact ground state."""
    t = check_pair_type(state.model, pair_type)
    b = state.basis
    return collective_rho(b.omega1, b.omega2, b.p, b.n1_values, state.amplitudes, t, Source.EXACT)


# --- Fock-space oracle -----------------------------------------------------


class FockSpace:
    """All configurations of ``p`` pairs on ``omega1 + omega2`` modes as bitmasks.

    Modes ``0 .. omega1-1`` belong to the lower level, the rest to the upper one.
    """

    def __init__(self, model: PairingModel, p: int, limit: int = FOCK_LIMIT):
        n = model.n_modes
        size = math.comb(n, p)
        if size > limit:
            raise TooLarge(f"C({n}, {p}) = {size} configurations exceeds the limit {limit}")
        self.model = model
        self.p = p
        self.configs = [sum(1 << k for k in occ) for occ in combinations(range(n), p)]
        self.index = {c: i for i, c in enumerate(self.configs)}

    def __len__(self):
        return len(self.configs)

    def level(self, mode: int) -> int:
        return 0 if mode < self.model.omega1 else 1

    def modes_for(self, pair_type) -> tuple[int, int]:
        t = check_pair_type(self.model, pair_type)
        o1 = self.model.omega1
        return {PairType.SAME_LOWER: (0, 1), PairType.CROSS: (0, o1), PairType.SAME_UPPER: (o1, o1 + 1)}[t]

    def hamiltonian(self):
        """Sparse matrix of H built mode by mode from the pair operators."""
        model = self.model
        n = model.n_modes
        eps = model.energies
        rows, cols, vals = [], [], []
        for j, c in enumerate(self.configs):
            occ = [k for k in range(n) if c >> k & 1]
            empty = [k for k in range(n) if not c >> k & 1]
            diag = 0.0
            for k in occ:
                lk = self.level(k)
                diag += 2.0 * eps[lk] - model.coupling(lk, lk)
            rows.append(j)
            cols.append(j)
            vals.append(diag)
            for src in occ:
                for dst in empty:
                    target = (c & ~(1 << src)) | (1 << dst)
                    rows.append(self.index[target])
                    cols.append(j)
                    vals.append(-model.coupling(self.level(dst), self.level(src)))
        dim = len(self.configs)
        return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))

    def ground_state(self) -> tuple[float, np.ndarray]:
        h = self.hamiltonian()
        if h.shape[0] <= 3000:
            w, v = np.linalg.eigh(h.toarray())
            return float(w[0]), v[:, 0]
        w, v = scipy.sparse.linalg.eigsh(h, k=1, which="SA", tol=1e-14)
        return float(w[0]), v[:, 0]


def fock_rho(space: FockSpace, psi: np.ndarray, pair_type, source: Source = Source.EXACT) -> XState:
    """Partial trace of ``psi`` onto the two modes selected by ``pair_type``."""
    t = PairType.parse(pair_type)
    a, b = space.modes_for(t)
    psi = np.asarray(psi, dtype=float) / np.linalg.norm(psi)
    rest_mask = ~((1 << a) | (1 << b))
    blocks: dict[int, np.ndarray] = {}
    for amp, c in zip(psi, space.configs):
        idx = 2 * (c >> a & 1) + (c >> b & 1)
        blocks.setdefault(c & rest_mask, np.zeros(4))[idx] += amp
    rho = np.zeros((4, 4))
    for vec in blocks.values():
        rho += np.outer(vec, vec)
    return XState.from_matrix(rho, t, source)


def fock_oracle(model: PairingModel, occ, pair_type=None, limit: int = FOCK_LIMIT):
    """Ground energy and, if ``pair_type`` is given, two-mode state by brute force."""
    p = validate(model, occ).p
    space = FockSpace(model, p, limit)
    e0, psi = space.ground_state()
    if pair_type is None:
        return e0, None
    return e0, fock_rho(space, psi, pair_type)


def fock_projected_bcs(model: PairingModel, sol: BcsSolution, p: int | None = None,
                       limit: int = FOCK_LIMIT) -> tuple[FockSpace, np.ndarray, float]:
    """Apply the number projector to the BCS product state by keeping its ``p``-pair components.

    Returns the configuration space, the normalized projected state and the
    squared norm of the unnormalized projection.
    """
    p = sol.p if p is None else int(p)
    space = FockSpace(model, p, limit)
    amp = {0: (sol.u1, sol.v1), 1: (sol.u2, sol.v2)}
    psi = np.empty(len(space))
    for i, c in enumerate(space.configs):
        value = 1.0
        for k in range(model.n_modes):
            u, v = amp[space.level(k)]
            value *= v if c >> k & 1 else u
        psi[i] = value
    norm2 = float(psi @ psi)
    return space, psi / math.sqrt(norm2) if norm2 > 0 else psi, norm2
