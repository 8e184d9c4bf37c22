import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (eig_entropy, eig_mutual_information, grid_conditional_entropy, mp_wootters,
                      plog_sum, random_xstate)
from pairquant.errors import InvalidState
from pairquant.xstate import (XState, classical_correlation, clamp_events, concurrence,
                              conditional_entropies, discord, entropy, mutual_information,
                              wootters_concurrence)


@st.composite
def xstates(draw, saturated=None):
    w = np.array([draw(st.floats(0.0, 1.0)) for _ in range(4)])
    if w.sum() < 1e-6:
        w = np.array([1.0, 0.0, 0.0, 0.0])
    w = w / w.sum()
    bound = math.sqrt(w[1] * w[2])
    sat = draw(st.booleans()) if saturated is None else saturated
    frac = 1.0 if sat else draw(st.floats(-1.0, 1.0))
    return XState(*(float(x) for x in w), float(frac * bound))


# --- invariants ------------------------------------------------------------


def test_check_accepts_valid_state():
    XState(0.25, 0.25, 0.25, 0.25, 0.25).check()


@pytest.mark.parametrize("args", [
    (0.5, 0.5, 0.5, 0.0, 0.0),          # trace 1.5
    (-0.1, 0.6, 0.5, 0.0, 0.0),         # negative population
    (0.5, 0.25, 0.25, 0.0, 0.3),        # coherence above sqrt(rho22 rho33)
    (float("nan"), 0.5, 0.5, 0.0, 0.0),
])
def test_check_rejects_invalid(args):
    with pytest.raises(InvalidState):
        XState(*args).check()


def test_from_matrix_round_trip(rng):
    x = random_xstate(rng)
    assert XState.from_matrix(x.matrix()).as_tuple() == x.as_tuple()


def test_from_matrix_rejects_non_x_form():
    m = np.eye(4) / 4
    m[0, 3] = m[3, 0] = 0.1
    with pytest.raises(InvalidState):
        XState.from_matrix(m)


# --- concurrence -----------------------------------------------------------


def test_bell_like_state_is_maximally_entangled():
    x = XState(0.0, 0.5, 0.5, 0.0, 0.5)
    assert concurrence(x) == pytest.approx(1.0, abs=1e-15)
    assert wootters_concurrence(x) == pytest.approx(1.0, abs=1e-12)


def test_product_state_has_no_entanglement():
    # |psi_A> x |psi_B> with occupations 0.3, 0.6 and no coherence
    a, b = 0.3, 0.6
    x = XState((1 - a) * (1 - b), (1 - a) * b, a * (1 - b), a * b, 0.0)
    assert concurrence(x) == 0.0


@settings(max_examples=300, deadline=None)
@given(xstates())
def test_concurrence_matches_extended_precision_spin_flip(x):
    assert concurrence(x) == pytest.approx(mp_wootters(x), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(xstates(saturated=False))
def test_concurrence_matches_float_spin_flip_on_interior_states(x):
    # interior states are full rank, so the double-precision route is accurate
    if min(np.linalg.eigvalsh(x.matrix())) < 1e-6:
        return
    assert concurrence(x) == pytest.approx(wootters_concurrence(x), abs=1e-10)


def test_concurrence_saturated_coherence_matches_printed_form(rng):
    for _ in range(200):
        x = random_xstate(rng, saturated=True)
        printed = max(0.0, 2 * math.sqrt(x.rho22 * x.rho33) - 2 * math.sqrt(x.rho11 * x.rho44))
        assert concurrence(x) == pytest.approx(printed, abs=1e-15)


# --- entropies -------------------------------------------------------------


@settings(max_examples=300, deadline=None)
@given(xstates())
def test_entropy_matches_numerical_eigenvalues(x):
    assert entropy(x) == pytest.approx(eig_entropy(x.matrix()), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(xstates())
def test_mutual_information_matches_partial_trace_oracle(x):
    assert mutual_information(x) == pytest.approx(eig_mutual_information(x.matrix()), abs=1e-12)


def test_mutual_information_matches_printed_form_when_saturated(rng):
    for _ in range(200):
        x = random_xstate(rng, saturated=True)
        r11, r22, r33, r44 = x.diagonal
        printed = (-plog_sum([r11, r44, r22 + r33])
                   + plog_sum([r11 + r22, r33 + r44]) + plog_sum([r11 + r33, r22 + r44]))
        assert mutual_information(x) == pytest.approx(printed, abs=1e-12)


def test_theta_matches_printed_form_when_saturated(rng):
    for _ in range(200):
        x = random_xstate(rng, saturated=True)
        r11, r22, r33, r44 = x.diagonal
        printed = math.sqrt((r11 + r22 - r33 - r44) ** 2 + 4 * r22 * r33)
        assert conditional_entropies(x)[2] == pytest.approx(printed, abs=1e-14)


def test_s1_matches_printed_form(rng):
    for _ in range(200):
        x = random_xstate(rng)
        r11, r22, r33, r44 = x.diagonal
        printed = -(r11 * math.log2(r11 / (r11 + r33)) + r33 * math.log2(r33 / (r11 + r33))
                    + r22 * math.log2(r22 / (r22 + r44)) + r44 * math.log2(r44 / (r22 + r44)))
        assert conditional_entropies(x)[0] == pytest.approx(printed, abs=1e-12)


# --- classical correlation and discord ---------------------------------------


@settings(max_examples=100, deadline=None)
@given(xstates())
def test_min_branch_not_beaten_by_measurement_grid(x):
    s1, s2, _ = conditional_entropies(x)
    assert min(s1, s2) <= grid_conditional_entropy(x, step_deg=2.0) + 1e-9


@settings(max_examples=300, deadline=None)
@given(xstates())
def test_measure_inequalities(x):
    cs = discord(x)
    assert 0.0 <= cs.concurrence <= 1.0
    assert cs.classical >= -1e-10
    assert cs.discord >= -1e-10
    assert cs.mutual_info >= max(cs.classical, cs.discord) - 1e-10
    assert cs.discord == pytest.approx(cs.mutual_info - cs.classical, abs=1e-12)


def test_branch_label_follows_minimum(rng):
    for _ in range(50):
        x = random_xstate(rng)
        cs = discord(x)
        assert cs.branch == ("S1" if cs.s1 < cs.s2 else "S2")
        assert classical_correlation(x) == (cs.classical, cs.branch)


def test_a_side_discord_is_b_side_of_swapped_state(rng):
    x = random_xstate(rng)
    assert discord(x, side="A") == discord(x.swap_qubits())
    with pytest.raises(ValueError):
        discord(x, side="C")


def test_classical_state_has_zero_discord():
    # diagonal and product: no correlations of any kind
    x = XState(0.42, 0.18, 0.28, 0.12, 0.0)
    cs = discord(x)
    for value in (cs.concurrence, cs.mutual_info, cs.classical, cs.discord):
        assert abs(value) < 1e-12


def test_tiny_negative_populations_are_clamped_and_counted():
    before = clamp_events()
    x = XState(0.5 + 1e-13, 0.25, 0.25, -1e-13, 0.0)
    x.check()
    assert math.isfinite(discord(x).discord)
    assert clamp_events() > before
