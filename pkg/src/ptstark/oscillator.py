"""Isotropic oscillator with the imaginary linear term: E_k = k + 3/2 + g^2/2."""

from dataclasses import dataclass

import numpy as np

from .eigen import solve_pencil
from .slater import build_pencil

__all__ = ["OscillatorLevel", "ho_energy", "ho_levels", "similarity_check"]


@dataclass(frozen=True)
class OscillatorLevel:
    k: int
    g: float

    @property
    def energy(self):
        return ho_energy(self.k, self.g)


def ho_energy(k, g):
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return k + 1.5 + 0.5 * g * g


def ho_levels(m, g, count):
    """Lowest ``count`` exact energies in the fixed-m block, with multiplicity.

    Shell k holds one state for each l with l = k, k-2, ... and l >= |m|.
    """
    out = []
    k = abs(m)
    while len(out) < count:
        n_l = len([l for l in range(k % 2, k + 1, 2) if l >= abs(m)])
        out.extend([ho_energy(k, g)] * n_l)
        k += 1
    return np.array(out[:count])


def similarity_check(basis, g, n_levels):
    """Max deviation of the lowest levels from E(0) + g^2/2 in one basis.

    H = U H0 U^-1 + g^2/2 makes the whole spectrum shift rigidly by g^2/2;
    the returned deviation measures how far a truncated basis is from that.
    """
    pencil = build_pencil(basis, "harmonic")
    e0 = solve_pencil(pencil, 0.0).eigenvalues[:n_levels]
    eg = solve_pencil(pencil, g).eigenvalues[:n_levels]
    return float(np.abs(eg - (e0 + 0.5 * g * g)).max())
