import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptstark.angular import (
    SphericalLabel,
    cos_theta_element,
    degeneracy,
    parity_eigenvalue,
    selection_allowed,
)

from oracles import cos_theta_quadrature

# frozen from cos_theta_quadrature (Gauss-Legendre, 64 nodes)
FROZEN = [
    ((0, 1, 0), 0.5773502691896257),
    ((2, 2, 0), 0.0),
    ((1, 2, 1), 0.4472135954999579),
]


@pytest.mark.parametrize("args, expected", FROZEN)
def test_cos_theta_examples(args, expected):
    assert cos_theta_element(*args) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("l", range(0, 12))
def test_cos_theta_matches_quadrature(l):
    for lp in (l, l + 1, l + 2):
        for m in range(-min(l, lp), min(l, lp) + 1):
            assert cos_theta_element(l, lp, m) == pytest.approx(
                cos_theta_quadrature(l, lp, m), abs=1e-12
            )


@given(st.integers(0, 12), st.integers(0, 12), st.integers(-12, 12))
def test_cos_theta_symmetric_in_l_and_even_in_m(l, lp, m):
    if abs(m) > min(l, lp):
        with pytest.raises(ValueError):
            cos_theta_element(l, lp, m)
        return
    v = cos_theta_element(l, lp, m)
    assert v == cos_theta_element(lp, l, m) == cos_theta_element(l, lp, -m)
    if abs(l - lp) != 1:
        assert v == 0.0
    else:
        assert 0 < v < 1


def test_cos_theta_rejects_bad_arguments():
    with pytest.raises(ValueError):
        cos_theta_element(1, 2, 2)
    with pytest.raises(ValueError):
        cos_theta_element(-1, 0, 0)


def test_parity():
    assert [parity_eigenvalue(l) for l in (0, 1, 4)] == [1, -1, 1]
    assert SphericalLabel(0, 3, -2).parity == -1


def test_selection_rules():
    assert selection_allowed(0, 1, 0, 0)
    assert not selection_allowed(0, 2, 0, 0)
    assert not selection_allowed(1, 2, 1, 0)


@pytest.mark.parametrize(
    "model, level, expected",
    [("oscillator", 2, 6), ("hydrogen", 3, 9), ("generic-central", 2, 5)],
)
def test_degeneracy(model, level, expected):
    assert degeneracy(model, level) == expected


def test_degeneracy_errors():
    with pytest.raises(ValueError):
        degeneracy("hydrogen", 0)
    with pytest.raises(ValueError):
        degeneracy("morse", 1)


def test_label_validation():
    with pytest.raises(ValueError):
        SphericalLabel(0, 1, 2)
    with pytest.raises(ValueError):
        SphericalLabel(-1, 0, 0)


def test_cos_theta_completes_to_unit_norm():
    # sum over lp of |<lp m|cos|l m>|^2 = <l m|cos^2|l m>, which the
    # quadrature oracle evaluates directly
    mu, w = np.polynomial.legendre.leggauss(64)
    from oracles import normalized_legendre

    for l in range(6):
        for m in range(l + 1):
            direct = np.sum(w * mu**2 * normalized_legendre(l, m, mu) ** 2)
            via = sum(cos_theta_element(l, lp, m) ** 2 for lp in (l - 1, l + 1) if lp >= abs(m))
            assert via == pytest.approx(direct, abs=1e-12)
