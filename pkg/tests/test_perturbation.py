import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptstark.eigen import solve_pencil
from ptstark.perturbation import (
    COMPLEX_FOR_SMALL_G,
    INCONCLUSIVE,
    ParabolicLabel,
    analyze_pencil,
    degenerate_subspaces,
    first_order_corrections,
    hydrogen_first_order,
    hydrogen_pencil,
    hydrogen_shell_report,
)
from ptstark.slater import BasisSpec, build_pencil

import oracles

# frozen from oracles.shell_z_oracle (exact radial functions, quadrature)
FROZEN_SHELL = {
    2: [-3.0, 0.0, 0.0, 3.0],
    3: [-9.0, -4.5, -4.5, 0.0, 0.0, 0.0, 4.5, 4.5, 9.0],
}


def shell_z_oracle(n):
    states = [(l, m) for m in range(-(n - 1), n) for l in range(abs(m), n)]
    Z = np.zeros((len(states), len(states)))
    for a, (l, m) in enumerate(states):
        for b, (lp, mp) in enumerate(states):
            if m == mp and abs(l - lp) == 1:
                Z[a, b] = oracles.hydrogen_z_element(n, l, lp, m)
    return np.linalg.eigvalsh(Z)


def test_2s_2p0_element():
    assert oracles.hydrogen_z_element(2, 0, 1, 0) == pytest.approx(-3.0, abs=1e-10)


@pytest.mark.parametrize("n", [2, 3])
def test_oracle_reproduces_frozen_shell(n):
    np.testing.assert_allclose(shell_z_oracle(n), FROZEN_SHELL[n], atol=1e-9)


@pytest.mark.parametrize("n", [2, 3])
def test_shell_first_order(n):
    report = hydrogen_shell_report(n)
    assert len(report.subspace) == n * n
    assert report.unperturbed_energy == -0.5 / n**2
    np.testing.assert_allclose(report.first_order, FROZEN_SHELL[n], atol=1e-6)
    w = np.sort(report.first_order)
    np.testing.assert_allclose(w, -w[::-1], atol=1e-8)
    assert report.verdict == COMPLEX_FOR_SMALL_G


@pytest.mark.parametrize("n", [2, 3])
def test_parabolic_coefficients_are_shell_eigenvalues(n):
    w = hydrogen_shell_report(n).first_order
    for n1 in range(n):
        for m in range(-(n - 1 - n1), n - n1):
            n2 = n - 1 - abs(m) - n1
            if n2 < 0:
                continue
            c = hydrogen_first_order(ParabolicLabel(n1, n2, m))
            assert np.abs(w - c).min() < 1e-6


def test_hydrogen_first_order_examples():
    assert hydrogen_first_order(ParabolicLabel(0, 0)) == 0.0
    assert hydrogen_first_order(ParabolicLabel(1, 0)) == 3.0


@given(st.integers(0, 6), st.integers(-4, 4))
def test_q_zero_has_no_linear_shift(k, m):
    assert hydrogen_first_order(ParabolicLabel(k, k, m)) == 0.0


@given(st.integers(0, 6), st.integers(0, 6), st.integers(-4, 4))
def test_label_structure(n1, n2, m):
    lab = ParabolicLabel(n1, n2, m)
    assert lab.n == n1 + n2 + abs(m) + 1
    assert abs(lab.q) <= lab.n - 1 - abs(m)
    assert hydrogen_first_order(lab.conjugate()) == -hydrogen_first_order(lab)


def test_label_rejects_negative():
    with pytest.raises(ValueError):
        ParabolicLabel(-1, 0)


def test_fixed_m_hydrogen_group_size():
    pencil = hydrogen_pencil(2, 0)
    spec = solve_pencil(pencil, 0.0)
    groups = degenerate_subspaces(spec, 1e-6)
    sizes = {round(float(np.mean(spec.eigenvalues.real[g])), 6): len(g) for g in groups}
    assert sizes[-0.125] == 2


def test_oscillator_k1_group_size_in_m0_block():
    pencil = build_pencil(BasisSpec(alpha=2.0, m=0, l_max=4, n_radial=12), "harmonic")
    spec = solve_pencil(pencil, 0.0)
    groups = degenerate_subspaces(spec, 1e-4)
    k1 = [g for g in groups if abs(np.mean(spec.eigenvalues.real[g]) - 2.5) < 1e-3]
    assert len(k1) == 1 and len(k1[0]) == 1


def test_exact_degeneracy_with_zero_tolerance():
    assert degenerate_subspaces(np.array([1.0, 1.0, 2.0]), tol=0) == [[0, 1], [2]]


def test_groups_are_transitive():
    assert degenerate_subspaces(np.array([0.0, 0.6, 1.2, 5.0]), tol=0.7) == [[0, 1, 2], [3]]


@pytest.mark.parametrize("kind", ["harmonic", "linear"])
def test_no_linear_shift_for_nonhydrogenic(kind):
    pencil = build_pencil(BasisSpec(alpha=2.0, m=0, l_max=4, n_radial=12), kind)
    reports = analyze_pencil(pencil, tol=1e-4, n_levels=10)
    assert reports
    for r in reports:
        assert np.abs(r.first_order).max() < 1e-8
        assert r.verdict == INCONCLUSIVE


def test_rejects_non_orthonormal_vectors():
    pencil = hydrogen_pencil(2, 0)
    spec = solve_pencil(pencil, 0.0, want_vectors=True)
    with pytest.raises(ValueError):
        first_order_corrections(pencil, [0, 1], 2.0 * spec.eigenvectors)


def test_hydrogen_pencil_bounds():
    with pytest.raises(ValueError):
        hydrogen_pencil(0)
    with pytest.raises(ValueError):
        hydrogen_pencil(2, m=2)
