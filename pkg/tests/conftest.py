"""Independent oracles shared by the test modules.

Nothing here calls the closed forms under test: entropies come from numpy
eigensolvers, the spin-flip concurrence from 40-digit mpmath arithmetic, and
conditional entropies from an explicit sweep over projective measurements.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from pairquant.xstate import XState


def random_xstate(rng: np.random.Generator, saturated: bool = False) -> XState:
    """Uniform diagonal on the simplex and a coherence inside the positivity bound."""
    w = rng.dirichlet(np.ones(4))
    bound = math.sqrt(w[1] * w[2])
    c = bound * rng.choice([-1.0, 1.0]) if saturated else rng.uniform(-bound, bound)
    return XState(*(float(x) for x in w), float(c))


def plog_sum(values) -> float:
    """-sum x log2 x over strictly positive entries."""
    v = np.asarray(values, dtype=float)
    v = v[v > 1e-300]
    return float(-(v * np.log2(v)).sum())


def eig_entropy(matrix) -> float:
    return plog_sum(np.linalg.eigvalsh(np.asarray(matrix)))


def partial_traces(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduced matrices of qubits A and B for the ordering |a b>, index 2a + b."""
    t = m.reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", t), np.einsum("ijil->jl", t)


def eig_mutual_information(matrix) -> float:
    m = np.asarray(matrix)
    ra, rb = partial_traces(m)
    return eig_entropy(ra) + eig_entropy(rb) - eig_entropy(m)


_MP_FLIP = None


def mp_wootters(rho: XState, dps: int = 40) -> float:
    """Spin-flip concurrence with eigenvalues of rho (sy x sy) rho* (sy x sy) in extended precision."""
    global _MP_FLIP
    with mpmath.workdps(dps):
        if _MP_FLIP is None:
            _MP_FLIP = mpmath.matrix([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])
        m = mpmath.matrix(rho.matrix().tolist())
        lam = mpmath.eig(m * _MP_FLIP * m * _MP_FLIP, left=False, right=False)
        roots = sorted((mpmath.sqrt(max(mpmath.re(x), 0)) for x in lam), reverse=True)
        return float(max(0, roots[0] - roots[1] - roots[2] - roots[3]))


def grid_conditional_entropy(rho: XState, step_deg: float = 1.0, azimuths=(0.0, 90.0)) -> float:
    """Minimum over a polar/azimuthal grid of projective measurements on B of S(A | outcome)."""
    m = rho.matrix()
    pol = np.deg2rad(np.arange(0.0, 180.0 + 1e-9, step_deg))
    out = np.inf
    for phi in np.deg2rad(np.asarray(azimuths, dtype=float)):
        # |n+> = cos(t/2)|0> + e^{i phi} sin(t/2)|1>, |n-> orthogonal
        plus = np.stack([np.cos(pol / 2), np.exp(1j * phi) * np.sin(pol / 2)], axis=1)
        minus = np.stack([-np.exp(-1j * phi) * np.sin(pol / 2), np.cos(pol / 2)], axis=1)
        t = m.reshape(2, 2, 2, 2)
        total = np.zeros(len(pol))
        for vec in (plus, minus):
            # unnormalized conditional state of A: <n| rho |n> on B
            cond = np.einsum("gj,ijkl,gl->gik", vec.conj(), t, vec)
            prob = np.einsum("gii->g", cond).real
            tr = prob
            det = (cond[:, 0, 0] * cond[:, 1, 1] - cond[:, 0, 1] * cond[:, 1, 0]).real
            disc = np.sqrt(np.clip(tr * tr - 4 * det, 0.0, None))
            for lam in (0.5 * (tr + disc), 0.5 * (tr - disc)):
                with np.errstate(divide="ignore", invalid="ignore"):
                    term = np.where((lam > 1e-300) & (prob > 1e-300), -lam * np.log2(lam / prob), 0.0)
                total += term
        out = min(out, float(total.min()))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --- acceptance report -------------------------------------------------------

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
