"""Generalized eigenproblem (H0 + i g Z) v = E S v for a nonorthogonal basis.

The pencil is reduced by the Cholesky congruence S = L L^T to the complex
symmetric matrix M(g) = L^-1 (H0 + i g Z) L^-T.  Because H0 commutes and Z
anticommutes with the parity diagonal D, scaling the odd-parity components
by i turns M(g) into a real (nonsymmetric) matrix.  Its spectrum is then
computed by the real LAPACK path, which returns conjugate pairs exactly.
"""

from dataclasses import dataclass
import weakref

import numpy as np
import scipy.linalg as sla

from .slater import MatrixPencil, PencilError, cholesky_pivots

__all__ = [
    "Spectrum",
    "ConditionReport",
    "ConvergenceError",
    "CONDITION_WARNING",
    "sort_eigenvalues",
    "reduce",
    "pt_real_form",
    "eigvals",
    "solve_pencil",
    "condition_diagnostics",
]

CONDITION_WARNING = 1e12


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to converge."""

    def __init__(self, message, iterations=None, trace=None):
        super().__init__(message)
        self.iterations = iterations
        self.trace = trace if trace is not None else []


@dataclass
class Spectrum:
    """Eigenvalues at a single coupling g, ordered by (Re, Im) ascending."""

    g: float
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = None
    labels: list = None
    residuals: np.ndarray = None

    def __len__(self):
        return len(self.eigenvalues)

    def lowest(self, n):
        return self.eigenvalues[:n]


@dataclass(frozen=True)
class ConditionReport:
    overlap_condition: float
    smallest_pivot: float
    warning: bool
    scaled_condition: float = None


def sort_eigenvalues(values):
    """Permutation ordering complex values by real part, then imaginary part."""
    values = np.asarray(values)
    return np.lexsort((values.imag, values.real))


# S = L L^T and the reduced real matrices depend only on the pencil.
_reduction_cache = weakref.WeakKeyDictionary()


def _reduced(pencil):
    try:
        return _reduction_cache[pencil]
    except KeyError:
        pass
    L, _ = cholesky_pivots(pencil.S)
    L = np.tril(L)

    def congruence(A):
        X = sla.solve_triangular(L, A, lower=True)
        X = sla.solve_triangular(L, X.T, lower=True)
        # exact arithmetic gives a symmetric result; rounding does not
        return 0.5 * (X + X.T)

    Hr, Zr = congruence(pencil.H0), congruence(pencil.Z)
    d = pencil.parity.astype(float)
    flip = d[:, None] * d[None, :]
    tol = 1e-12 * max(np.abs(Hr).max(), np.abs(Zr).max(), np.finfo(float).tiny)
    pt = bool(np.abs(flip * Hr - Hr).max() <= tol and np.abs(flip * Zr + Zr).max() <= tol)
    parts = (L, Hr, Zr, pt)
    _reduction_cache[pencil] = parts
    return parts


def reduce(pencil, g):
    """Dense complex symmetric matrix M(g) = L^-1 (H0 + i g Z) L^-T."""
    _, Hr, Zr, _ = _reduced(pencil)
    return Hr + 1j * g * Zr


def _parity_sign(parity):
    odd = parity < 0
    # rows even / columns odd pick up i*i = -1, the transposed block +1
    return np.where(~odd[:, None] & odd[None, :], -1.0, 0.0) + np.where(
        odd[:, None] & ~odd[None, :], 1.0, 0.0
    )


def pt_real_form(M, parity):
    """Real matrix similar to a PT-symmetric complex symmetric ``M``.

    With T = diag(i^[l odd]) the similarity T^-1 M T is real whenever
    D M D = conj(M) for the parity diagonal D.
    """
    M = np.asarray(M)
    t = np.where(np.asarray(parity) < 0, 1j, 1.0)
    K = (M * t[None, :]) / t[:, None]
    scale = max(np.abs(K).max(), np.finfo(float).tiny)
    if np.abs(K.imag).max() > 1e-12 * scale:
        raise ValueError("matrix is not PT-symmetric with respect to this parity")
    return K.real


def eigvals(M):
    """All eigenvalues of a dense matrix, sorted by (Re, Im).

    Real input goes through the real Hessenberg-QR path so complex
    eigenvalues come in exact conjugate pairs.
    """
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    try:
        w = sla.eigvals(M, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"QR iteration failed: {exc}") from exc
    w = np.asarray(w, dtype=complex)
    return w[sort_eigenvalues(w)]


def solve_pencil(pencil, g, want_vectors=False):
    """Spectrum of H0 + i g Z relative to S.

    At g = 0 the reduced matrix is real symmetric and a symmetric solver is
    used; its eigenvectors come back S-orthonormal.  Otherwise eigenvectors
    are scaled to unit Euclidean norm.  Pencils with D H0 D = H0 and
    D Z D = -Z (D the parity diagonal) are solved through the real form of
    ``pt_real_form``, which returns exact conjugate pairs; any other pencil
    goes through the general complex solver.
    """
    g = float(g)
    L, Hr, Zr, pt = _reduced(pencil)
    t = np.where(pencil.parity < 0, 1j, 1.0) if pt else np.ones(pencil.dim)
    if g == 0.0:
        if want_vectors:
            w, V = np.linalg.eigh(Hr)
        else:
            w, V = np.linalg.eigvalsh(Hr), None
        w = w.astype(complex)
    else:
        if pt:
            K = Hr + g * _parity_sign(pencil.parity) * Zr
        else:
            K = Hr + 1j * g * Zr
        try:
            if want_vectors:
                w, V = sla.eig(K, check_finite=False)
            else:
                w, V = sla.eigvals(K, check_finite=False), None
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"QR iteration failed at g={g}: {exc}") from exc
        if V is not None:
            V = V * t[:, None]
    order = sort_eigenvalues(w)
    w = np.asarray(w, dtype=complex)[order]
    spectrum = Spectrum(g=g, eigenvalues=w)
    if V is None:
        return spectrum
    X = sla.solve_triangular(L.T, V[:, order], lower=False)
    if g != 0.0:
        X = X / np.linalg.norm(X, axis=0)
    H, S = pencil.matrices(g)
    unit = X / np.linalg.norm(X, axis=0)
    spectrum.eigenvectors = X
    spectrum.residuals = np.linalg.norm(H @ unit - (S @ unit) * w, axis=0)
    return spectrum


def _power_estimate(apply, n, iterations, rtol):
    v = np.ones(n) / np.sqrt(n)
    estimate = None
    for _ in range(iterations):
        u = apply(v)
        new = float(np.linalg.norm(u))
        if new == 0.0:
            return 0.0
        v = u / new
        if estimate is not None and abs(new - estimate) <= rtol * abs(new):
            return new
        estimate = new
    return estimate


def condition_diagnostics(pencil, iterations=20, rtol=1e-3):
    """Estimate the 2-norm condition number of the overlap matrix.

    Largest and smallest eigenvalues come from power and inverse power
    iteration.  ``pencil`` may be a MatrixPencil or a bare overlap matrix.
    """
    S = pencil.S if isinstance(pencil, MatrixPencil) else np.asarray(pencil, float)
    n = S.shape[0]

    def estimate(A):
        try:
            L, pivots = cholesky_pivots(A)
        except PencilError as exc:
            return np.inf, exc.value
        L = np.tril(L)
        big = _power_estimate(lambda v: A @ v, n, iterations, rtol)

        def inverse(v):
            y = sla.solve_triangular(L, v, lower=True)
            return sla.solve_triangular(L.T, y, lower=False)

        inv_small = _power_estimate(inverse, n, iterations, rtol)
        return big * inv_small, float(pivots.min())

    condition, smallest = estimate(S)
    d = np.sqrt(np.abs(np.diag(S)))
    d[d == 0] = 1.0
    scaled, _ = estimate(S / d[:, None] / d[None, :])
    warn = bool(condition > CONDITION_WARNING or smallest <= 0)
    return ConditionReport(
        overlap_condition=float(condition),
        smallest_pivot=float(smallest),
        warning=warn,
        scaled_condition=float(scaled),
    )
