import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptstark.eigen import ConvergenceError
from ptstark.parabolic import (
    BasisSizeWarning,
    ChannelOperator,
    channel_eigenvalue,
    quantization_residual,
    scan_state,
    solve_state,
)
from ptstark.perturbation import ParabolicLabel, hydrogen_first_order


@pytest.mark.parametrize(
    "m, E, k, expected", [(0, -1 / 8, 0, 0.25), (0, -0.5, 0, 0.5), (1, -1 / 18, 1, 2 / 3)]
)
def test_channel_examples(m, E, k, expected):
    z = channel_eigenvalue(ChannelOperator(m, E, 0.0, +1), k)
    assert z == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("E", [-0.5, -0.125, -1 / 18])
@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("sign", [1, -1])
def test_closed_form_at_zero_coupling(E, m, sign):
    op = ChannelOperator(m, E, 0.0, sign)
    for k in range(6):
        assert channel_eigenvalue(op, k) == pytest.approx(op.closed_form(k), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(
    st.floats(-0.6, -0.04),
    st.floats(-0.05, 0.05),
    st.floats(0.0, 0.02),
    st.integers(0, 2),
    st.integers(0, 3),
)
def test_channels_are_conjugate_problems(re_e, im_e, g, m, k):
    E = complex(re_e, im_e)
    plus = ChannelOperator(m, E, g, +1)
    minus = ChannelOperator(m, np.conj(E), g, -1, basis_frequency=plus.basis_frequency)
    np.testing.assert_allclose(minus.matrix(), plus.matrix().conj(), atol=1e-12)
    z_plus = channel_eigenvalue(plus, k)
    z_minus = channel_eigenvalue(minus, k)
    assert z_plus == pytest.approx(np.conj(z_minus), abs=1e-10)


def test_residual_examples():
    assert abs(quantization_residual(ParabolicLabel(0, 0), -0.5, 0.0)) < 1e-12
    assert abs(quantization_residual(ParabolicLabel(1, 0), -0.125, 0.0)) < 1e-12
    r = quantization_residual(ParabolicLabel(0, 0), -0.4, 0.0)
    assert r == pytest.approx(np.sqrt(0.8) - 1, abs=1e-10)


@pytest.mark.parametrize(
    "label", [ParabolicLabel(n1, n - 1 - abs(m) - n1, m)
              for n in (1, 2, 3) for m in range(0, n) for n1 in range(n - m)]
)
def test_zero_coupling_energies(label):
    state = solve_state(label, 0.0)
    assert state.energy == pytest.approx(-0.5 / label.n**2, abs=1e-10)
    assert state.converged and state.basis_ok


@pytest.mark.parametrize("label", [ParabolicLabel(1, 0), ParabolicLabel(0, 1),
                                   ParabolicLabel(2, 0), ParabolicLabel(0, 2)])
def test_slope_matches_first_order(label):
    g = 1e-4
    slope = solve_state(label, g).energy.imag / g
    assert slope == pytest.approx(hydrogen_first_order(label), rel=0.02)


def test_slope_example_at_small_coupling():
    state = solve_state(ParabolicLabel(1, 0, 0), 0.002)
    assert state.energy.imag == pytest.approx(0.006, rel=0.02)


def test_q_zero_state_stays_real_to_order_g_cubed():
    state = solve_state(ParabolicLabel(0, 0, 1), 0.002)
    assert abs(state.energy.imag) < 1e-6


def test_conjugate_labels_give_conjugate_energies():
    a = solve_state(ParabolicLabel(2, 0, 0), 0.003).energy
    b = solve_state(ParabolicLabel(0, 2, 0), 0.003).energy
    assert a == pytest.approx(np.conj(b), abs=1e-10)


@pytest.mark.parametrize("label", [ParabolicLabel(1, 0), ParabolicLabel(1, 1), ParabolicLabel(0, 1, 1)])
def test_basis_doubling_is_stable(label):
    state = solve_state(label, 0.005)
    assert state.basis_shift is not None and state.basis_shift <= 1e-8


def test_small_basis_warns():
    op = ChannelOperator(0, -0.05, 0.05, +1, basis_size=10)
    with pytest.warns(BasisSizeWarning):
        channel_eigenvalue(op, 3, check=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        channel_eigenvalue(ChannelOperator(0, -0.5, 0.0, +1), 0, check=True)


def test_divergence_is_reported_with_trace():
    with pytest.raises(ConvergenceError) as info:
        solve_state(ParabolicLabel(1, 0), 0.001, max_iter=1, tol=1e-30, check_basis=False)
    assert info.value.trace


def test_basin_escape_is_reported():
    # seeding far from any level drives the secant outwards
    with pytest.raises(ConvergenceError) as info:
        solve_state(ParabolicLabel(0, 0), 0.0, initial_energy=-1e-4 + 0j, check_basis=False)
    assert "basin escape" in str(info.value)
    assert info.value.trace


def test_scan_state_ground():
    states = scan_state(ParabolicLabel(0, 0), [0.0, 0.01, 0.02])
    assert states[0].energy.imag == 0.0
    assert all(s.converged for s in states)
    assert all(np.isfinite(s.energy) for s in states)


def test_scan_state_validates_grid():
    with pytest.raises(ValueError):
        scan_state(ParabolicLabel(0, 0), [0.02, 0.01])
    with pytest.raises(ValueError):
        scan_state(ParabolicLabel(0, 0), [])


def test_channel_operator_validation():
    with pytest.raises(ValueError):
        ChannelOperator(0, -0.5, 0.0, 0)
    with pytest.raises(ValueError):
        ChannelOperator(0, -0.5, 0.0, 1, basis_size=5)
