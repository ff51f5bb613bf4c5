"""Estimator-style front ends: configure, ``fit`` to build, ``predict`` spectra over g.

Both classes follow the scikit-learn conventions (constructor stores
hyperparameters only, fitted state ends in ``_``, ``get_params`` /
``set_params`` / ``clone`` work) so scans can be parameter-swept with the
usual tooling.  ``predict`` takes a 1-D array of couplings g, or a column
vector, and returns a complex array of shape (n_g, n_levels).
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_couplings, check_int, check_positive
from .eigen import (
    ConvergenceError,
    Spectrum,
    condition_diagnostics,
    solve_pencil,
    sort_eigenvalues,
)
from .parabolic import DEFAULT_BASIS_SIZE, first_order_seed, solve_state
from .perturbation import ParabolicLabel
from .slater import POTENTIALS, BasisSpec, build_pencil

__all__ = ["SlaterPTSpectrum", "ParabolicStarkSpectrum", "parabolic_labels"]


class SlaterPTSpectrum(BaseEstimator):
    """Variational spectrum of p^2/2 + V(r) + i g z in a Slater basis.

    Parameters
    ----------
    potential : {"harmonic", "coulomb", "linear"}
    alpha : float, default=2.0
        Shared Slater exponent.
    m : int, default=0
        Magnetic quantum number of the block.
    l_max : int or None
        Highest orbital number; None means |m| + 6.
    n_radial : int, default=10
        Radial powers per l.
    n_levels : int or None
        Number of lowest eigenvalues returned by ``predict``; None returns all.
    """

    def __init__(self, potential="linear", alpha=2.0, m=0, l_max=None,
                 n_radial=10, n_levels=None):
        self.potential = potential
        self.alpha = alpha
        self.m = m
        self.l_max = l_max
        self.n_radial = n_radial
        self.n_levels = n_levels

    def fit(self, X=None, y=None):
        if self.potential not in POTENTIALS:
            raise ValueError(
                f"potential must be one of {sorted(POTENTIALS)}, got {self.potential!r}"
            )
        check_positive(self.alpha, "alpha")
        m = check_int(self.m, "m")
        l_max = abs(m) + 6 if self.l_max is None else check_int(self.l_max, "l_max", abs(m))
        n_radial = check_int(self.n_radial, "n_radial", 1)
        if self.n_levels is not None:
            check_int(self.n_levels, "n_levels", 1)
        self.basis_ = BasisSpec(alpha=float(self.alpha), m=m, l_max=l_max, n_radial=n_radial)
        self.pencil_ = build_pencil(self.basis_, self.potential)
        self.condition_ = condition_diagnostics(self.pencil_)
        return self

    def spectrum(self, g, want_vectors=False):
        check_is_fitted(self, "pencil_")
        return solve_pencil(self.pencil_, g, want_vectors)

    def predict(self, X):
        check_is_fitted(self, "pencil_")
        g = check_couplings(X)
        n = self.pencil_.dim if self.n_levels is None else min(self.n_levels, self.pencil_.dim)
        return np.array([self.spectrum(gi).eigenvalues[:n] for gi in g]).reshape(len(g), n)


def parabolic_labels(n_max):
    """All (n1, n2, m) with m >= 0 and principal number <= n_max.

    E depends on |m| only, so negative m would duplicate trajectories.
    """
    labels = []
    for n in range(1, n_max + 1):
        for m in range(0, n):
            for n1 in range(n - m - 1, -1, -1):
                labels.append(ParabolicLabel(n1, n - m - 1 - n1, m))
    return labels


class ParabolicStarkSpectrum(BaseEstimator):
    """Hydrogen eigenvalues with the imaginary Stark term, state by state.

    Energies at a new g are seeded from the converged solution at the
    nearest g already solved (continuation), falling back to first-order
    perturbation theory.  Calling ``predict`` on an ascending grid is
    therefore a continuation scan.

    Parameters
    ----------
    n_max : int, default=3
        Include every state with principal number <= n_max (m >= 0).
    labels : sequence of (n1, n2, m) or ParabolicLabel, optional
        Explicit state list; overrides ``n_max``.
    basis_size : int, default=40
        Channel basis size.
    check_basis : bool, default=True
        Re-solve each point in a doubled basis and record the shift.
    """

    def __init__(self, n_max=3, labels=None, basis_size=DEFAULT_BASIS_SIZE,
                 check_basis=True):
        self.n_max = n_max
        self.labels = labels
        self.basis_size = basis_size
        self.check_basis = check_basis

    def fit(self, X=None, y=None):
        check_int(self.basis_size, "basis_size", 10)
        if self.labels is None:
            self.labels_ = parabolic_labels(check_int(self.n_max, "n_max", 1))
        else:
            self.labels_ = [
                lab if isinstance(lab, ParabolicLabel) else ParabolicLabel(*lab)
                for lab in self.labels
            ]
        self.states_ = {}
        return self

    def _seed(self, label, g):
        solved = [s for (lab, gs), s in self.states_.items() if lab == label and s.converged]
        if not solved:
            return first_order_seed(label, g), None
        best = min(solved, key=lambda s: abs(s.g - g))
        return best.energy, (best.z1, best.z2)

    def solve(self, label, g):
        check_is_fitted(self, "labels_")
        key = (label, float(g))
        if key not in self.states_:
            seed, refs = self._seed(label, g)
            self.states_[key] = solve_state(
                label, g, seed, self.basis_size, refs, check_basis=self.check_basis
            )
        return self.states_[key]

    def spectrum(self, g):
        """Spectrum over all labels; a failed label contributes NaN."""
        values, labels = [], []
        for label in self.labels_:
            try:
                values.append(self.solve(label, g).energy)
            except ConvergenceError:
                values.append(complex(np.nan, np.nan))
            labels.append(label)
        values = np.array(values, dtype=complex)
        order = sort_eigenvalues(values)
        return Spectrum(g=float(g), eigenvalues=values[order], labels=[labels[i] for i in order])

    def predict(self, X):
        """Energies with columns in ``labels_`` order (not sorted)."""
        check_is_fitted(self, "labels_")
        g = check_couplings(X)
        out = np.full((len(g), len(self.labels_)), np.nan + 0j)
        for i in np.argsort(g, kind="stable"):
            for j, label in enumerate(self.labels_):
                try:
                    out[i, j] = self.solve(label, g[i]).energy
                except ConvergenceError:
                    pass
        return out
