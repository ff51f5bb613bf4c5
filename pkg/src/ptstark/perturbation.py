"""First-order degenerate perturbation theory as a reality predictor.

For H = H0 + lambda Z with lambda = i g, the first-order shifts of a
degenerate H0 level are lambda times the eigenvalues w of Z restricted to
that level.  Any nonzero w therefore means a complex eigenvalue for small g.
"""

from dataclasses import dataclass

import numpy as np

from .eigen import solve_pencil
from .slater import BasisSpec, build_pencil

__all__ = [
    "ParabolicLabel",
    "PerturbationReport",
    "COMPLEX_FOR_SMALL_G",
    "INCONCLUSIVE",
    "degenerate_subspaces",
    "first_order_corrections",
    "hydrogen_first_order",
    "analyze_pencil",
    "hydrogen_pencil",
    "hydrogen_shell_report",
]

COMPLEX_FOR_SMALL_G = "complex-for-small-g"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ParabolicLabel:
    """Parabolic quantum numbers of a hydrogen Stark state."""

    n1: int
    n2: int
    m: int = 0

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError(f"n1 and n2 must be non-negative, got {self}")

    @property
    def n(self):
        return self.n1 + self.n2 + abs(self.m) + 1

    @property
    def q(self):
        return self.n1 - self.n2

    def conjugate(self):
        """Label whose energy is the complex conjugate of this one."""
        return ParabolicLabel(self.n2, self.n1, self.m)

    def __str__(self):
        return f"({self.n1},{self.n2},{self.m})"


@dataclass
class PerturbationReport:
    subspace: list
    unperturbed_energy: float
    z_submatrix: np.ndarray
    first_order: np.ndarray
    verdict: str
    tolerance: float = 1e-8


def degenerate_subspaces(spectrum_at_zero, tol=1e-6):
    """Group indices of (nearly) equal eigenvalues.

    Two levels are linked when |E_i - E_j| <= tol * max(1, |E_i|); groups
    are the transitive closure of that relation.
    """
    values = np.asarray(getattr(spectrum_at_zero, "eigenvalues", spectrum_at_zero))
    values = values.real
    order = np.argsort(values, kind="stable")
    groups = []
    current = [int(order[0])] if len(order) else []
    for prev, idx in zip(order[:-1], order[1:]):
        if abs(values[idx] - values[prev]) <= tol * max(1.0, abs(values[prev])):
            current.append(int(idx))
        else:
            groups.append(sorted(current))
            current = [int(idx)]
    if current:
        groups.append(sorted(current))
    return groups


def first_order_corrections(pencil, group, vectors, energies=None, tol=1e-8):
    """Diagonalize Z on one degenerate group.

    Parameters
    ----------
    pencil : MatrixPencil
    group : sequence of int
        Column indices into ``vectors``.
    vectors : ndarray
        Eigenvectors of the g = 0 pencil, S-orthonormal on the group.
    energies : array-like, optional
        Unperturbed eigenvalues aligned with ``vectors``; their mean is
        reported as the level energy.
    """
    group = list(group)
    V = np.asarray(vectors)[:, group]
    gram = V.T @ pencil.S @ V
    deviation = np.abs(gram - np.eye(len(group))).max()
    if deviation > 1e-8:
        raise ValueError(
            f"vectors are not S-orthonormal on the group (deviation {deviation:.2e})"
        )
    zsub = V.T @ pencil.Z @ V
    zsub = 0.5 * (zsub + zsub.T).real
    w = np.linalg.eigvalsh(zsub)
    e0 = float(np.mean(np.asarray(energies).real[group])) if energies is not None else np.nan
    return PerturbationReport(
        subspace=group,
        unperturbed_energy=e0,
        z_submatrix=zsub,
        first_order=w,
        verdict=_verdict(w, tol),
        tolerance=tol,
    )


def _verdict(w, tol):
    return COMPLEX_FOR_SMALL_G if len(w) and np.abs(w).max() > tol else INCONCLUSIVE


def hydrogen_first_order(label):
    """Coefficient of lambda in E_{n q |m|}: (3/2) n q."""
    return 1.5 * label.n * label.q


def analyze_pencil(pencil, tol=1e-6, n_levels=None, z_tol=1e-8):
    """Reports for every degenerate group of a fixed-m pencil at g = 0."""
    spec = solve_pencil(pencil, 0.0, want_vectors=True)
    groups = degenerate_subspaces(spec, tol)
    if n_levels is not None:
        groups = [grp for grp in groups if min(grp) < n_levels]
    return [
        first_order_corrections(pencil, grp, spec.eigenvectors, spec.eigenvalues, z_tol)
        for grp in groups
    ]


def hydrogen_pencil(n, m=0):
    """Coulomb pencil that contains every exact hydrogen state of shell n.

    With alpha = 1/n, l_max = n - 1 and n radial powers per l, each R_nl is a
    polynomial times exp(-r/n) inside the span, so the shell is reproduced
    exactly (up to rounding) in every |m| <= n - 1 block.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if abs(m) > n - 1:
        raise ValueError(f"|m| must be <= n - 1, got m={m} for n={n}")
    return build_pencil(BasisSpec(alpha=1.0 / n, m=m, l_max=n - 1, n_radial=n), "coulomb")


def hydrogen_shell_report(n, tol=1e-6, z_tol=1e-8):
    """First-order report for the full n^2-dimensional hydrogen shell.

    Z conserves m, so the shell's z-matrix is block diagonal over the m
    blocks; each block comes from its own pencil.
    """
    e_exact = -0.5 / n**2
    subspace, blocks = [], []
    for m in range(-(n - 1), n):
        pencil = hydrogen_pencil(n, m)
        spec = solve_pencil(pencil, 0.0, want_vectors=True)
        group = [
            i
            for i, e in enumerate(spec.eigenvalues.real)
            if abs(e - e_exact) <= tol * max(1.0, abs(e_exact))
        ]
        report = first_order_corrections(
            pencil, group, spec.eigenvectors, spec.eigenvalues, z_tol
        )
        blocks.append(report.z_submatrix)
        subspace.extend((m, i) for i in group)
    size = sum(b.shape[0] for b in blocks)
    zsub = np.zeros((size, size))
    pos = 0
    for b in blocks:
        k = b.shape[0]
        zsub[pos : pos + k, pos : pos + k] = b
        pos += k
    w = np.linalg.eigvalsh(zsub)
    return PerturbationReport(
        subspace=subspace,
        unperturbed_energy=e_exact,
        z_submatrix=zsub,
        first_order=w,
        verdict=_verdict(w, z_tol),
        tolerance=z_tol,
    )
