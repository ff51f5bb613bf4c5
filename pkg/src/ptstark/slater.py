"""Analytic matrix elements over a Slater-type basis r^(l+j) exp(-alpha r) Y_l^m.

All radial integrals reduce to p! / beta^(p+1) with beta = 2 alpha, so every
matrix in this module is exact up to floating point rounding.  Basis
functions are left unnormalized; the generalized eigenproblem absorbs the
normalization.
"""

from dataclasses import dataclass, field
from math import lgamma, log, exp

import numpy as np
from scipy.linalg import lapack

from .angular import cos_theta_element

__all__ = [
    "POTENTIALS",
    "BasisSpec",
    "MatrixPencil",
    "PencilError",
    "radial_integral",
    "overlap_matrix",
    "kinetic_matrix",
    "potential_matrix",
    "z_matrix",
    "build_pencil",
    "cholesky_pivots",
]

# (prefactor, extra radial power) of V(r) = c r^d
POTENTIALS = {
    "harmonic": (0.5, 2),
    "coulomb": (-1.0, -1),
    "linear": (1.0, 1),
}

SYMMETRY_RTOL = 1e-12


class PencilError(ValueError):
    """Raised when a pencil violates its invariants.

    ``pivot`` carries the zero-based index of the failed Cholesky pivot when
    the overlap matrix is not numerically positive definite.
    """

    def __init__(self, message, pivot=None, value=None):
        super().__init__(message)
        self.pivot = pivot
        self.value = value


@dataclass(frozen=True)
class BasisSpec:
    """Single-exponent Slater basis at fixed magnetic quantum number.

    Functions are r^(l+j) exp(-alpha r) Y_l^m for l = |m|..l_max and
    j = 0..n_radial-1, ordered by l first.
    """

    alpha: float = 2.0
    m: int = 0
    l_max: int = 0
    n_radial: int = 1

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.l_max < abs(self.m):
            raise ValueError(f"l_max={self.l_max} must be >= |m|={abs(self.m)}")
        if self.n_radial < 1:
            raise ValueError(f"n_radial must be >= 1, got {self.n_radial}")

    @property
    def dim(self):
        return (self.l_max - abs(self.m) + 1) * self.n_radial

    def functions(self):
        """List of (l, radial power) pairs in basis order."""
        return [
            (l, l + j)
            for l in range(abs(self.m), self.l_max + 1)
            for j in range(self.n_radial)
        ]

    def quantum_arrays(self):
        fs = self.functions()
        return (
            np.array([f[0] for f in fs], dtype=int),
            np.array([f[1] for f in fs], dtype=int),
        )


def radial_integral(p, beta):
    """Integral of r^p exp(-beta r) over [0, inf), i.e. p! / beta^(p+1)."""
    if p < 0 or int(p) != p:
        raise ValueError(f"p must be a non-negative integer, got {p}")
    if not beta > 0:
        raise ValueError(f"beta must be > 0, got {beta}")
    value = 1.0 / beta
    for k in range(1, int(p) + 1):
        value *= k / beta
    if not np.isfinite(value) or value == 0.0:
        # partial products left the float range; the log form is still exact
        log_value = lgamma(p + 1) - (p + 1) * log(beta)
        if log_value > 709.0:
            raise OverflowError(f"radial integral p={p}, beta={beta} exceeds the float range")
        value = exp(log_value)
    return value


def _radial_table(p_max, beta):
    return np.array([radial_integral(p, beta) for p in range(p_max + 1)])


def _pairs(basis):
    la, na = basis.quantum_arrays()
    same_l = la[:, None] == la[None, :]
    power = na[:, None] + na[None, :]
    return la, na, same_l, power


def overlap_matrix(basis):
    la, na, same_l, power = _pairs(basis)
    table = _radial_table(int(power.max()) + 2, 2 * basis.alpha)
    return np.where(same_l, table[power + 2], 0.0)


def kinetic_matrix(basis, symmetrize=True):
    """Matrix of -1/2 Laplacian.

    The radial Laplacian acting on r^n exp(-alpha r) with angular momentum l
    gives [(n(n+1) - l(l+1))/r^2 - 2 alpha (n+1)/r + alpha^2] r^n exp(-alpha r),
    so each entry is a three-term combination of radial integrals.
    """
    alpha = basis.alpha
    la, na, same_l, power = _pairs(basis)
    table = _radial_table(int(power.max()) + 2, 2 * alpha)
    nb = na[None, :]
    lb = la[None, :]
    raw = -0.5 * (
        (nb * (nb + 1) - lb * (lb + 1)) * table[power]
        - 2 * alpha * (nb + 1) * table[power + 1]
        + alpha**2 * table[power + 2]
    )
    raw = np.where(same_l, raw, 0.0)
    if not symmetrize:
        return raw
    return 0.5 * (raw + raw.T)


def potential_matrix(basis, kind):
    try:
        c, d = POTENTIALS[kind]
    except KeyError:
        raise ValueError(
            f"unknown potential {kind!r}; expected one of {sorted(POTENTIALS)}"
        ) from None
    la, na, same_l, power = _pairs(basis)
    table = _radial_table(int(power.max()) + 2 + max(d, 0), 2 * basis.alpha)
    return np.where(same_l, c * table[power + 2 + d], 0.0)


def z_matrix(basis):
    la, na, same_l, power = _pairs(basis)
    table = _radial_table(int(power.max()) + 3, 2 * basis.alpha)
    l_set = range(abs(basis.m), basis.l_max + 1)
    coupling = {
        (l, lp): cos_theta_element(l, lp, basis.m) for l in l_set for lp in l_set
    }
    angular = np.array([[coupling[a, b] for b in la] for a in la])
    return angular * table[power + 3]


def cholesky_pivots(S):
    """Lower Cholesky factor of ``S`` and its pivots (squared diagonal).

    Raises PencilError with the failing pivot index when S is not
    numerically positive definite.
    """
    S = np.asarray(S, dtype=float)
    c, info = lapack.dpotrf(S, lower=1, clean=1)
    if info > 0:
        k = info - 1
        # Schur complement of the leading block that did factor
        lead = np.tril(c[:k, :k])
        w = np.linalg.solve(lead, S[:k, k]) if k else np.zeros(0)
        value = S[k, k] - w @ w
        raise PencilError(
            f"overlap matrix is not positive definite: pivot {k} = {value:.3e} "
            "(near linear dependence of the basis)",
            pivot=k,
            value=value,
        )
    if info < 0:
        raise ValueError(f"dpotrf: illegal argument {-info}")
    return c, np.diag(c) ** 2


@dataclass(frozen=True, eq=False)
class MatrixPencil:
    """Real symmetric triple (S, H0, Z) defining H(g) = H0 + i g Z.

    ``l_values`` holds the orbital number of every basis function; only its
    parity is used downstream, so synthetic pencils may pass 0/1 flags.
    """

    S: np.ndarray
    H0: np.ndarray
    Z: np.ndarray
    l_values: np.ndarray
    basis: BasisSpec = None
    potential_kind: str = None
    pivots: np.ndarray = field(default=None, repr=False)

    @property
    def dim(self):
        return self.S.shape[0]

    @property
    def parity(self):
        """Diagonal of the parity operator, (-1)^l per basis function."""
        return np.where(self.l_values % 2 == 0, 1, -1)

    @classmethod
    def from_arrays(cls, S, H0, Z, l_values=None, **kwargs):
        S, H0, Z = (np.array(a, dtype=float) for a in (S, H0, Z))
        if l_values is None:
            l_values = np.zeros(S.shape[0], dtype=int)
        pencil = cls(S, H0, Z, np.asarray(l_values, dtype=int), **kwargs)
        pencil.validate()
        return pencil

    def validate(self):
        n = self.S.shape[0]
        for name in ("S", "H0", "Z"):
            mat = getattr(self, name)
            if mat.shape != (n, n):
                raise PencilError(f"{name} has shape {mat.shape}, expected {(n, n)}")
            if not np.all(np.isfinite(mat)):
                raise PencilError(f"{name} has non-finite entries")
            scale = max(np.abs(mat).max(), np.finfo(float).tiny)
            if np.abs(mat - mat.T).max() > SYMMETRY_RTOL * scale:
                raise PencilError(f"{name} is not symmetric")
        if self.l_values.shape != (n,):
            raise PencilError("l_values must hold one entry per basis function")
        _, pivots = cholesky_pivots(self.S)
        object.__setattr__(self, "pivots", pivots)
        return self

    def matrices(self, g):
        """Non-Hermitian Hamiltonian matrix H0 + i g Z and the overlap."""
        return self.H0 + 1j * g * self.Z, self.S


def build_pencil(basis, kind):
    """Assemble S, H0 = T + V and Z for one potential and validate them."""
    S = overlap_matrix(basis)
    H0 = kinetic_matrix(basis) + potential_matrix(basis, kind)
    Z = z_matrix(basis)
    la, _ = basis.quantum_arrays()
    pencil = MatrixPencil(S, H0, Z, la, basis=basis, potential_kind=kind)
    return pencil.validate()
