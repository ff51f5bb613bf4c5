"""Hydrogen with the imaginary Stark term, separated in squared-parabolic coordinates.

With xi = r + z = u^2 and F = u^(1/2) f, each parabolic channel becomes the
half-line operator

    -F'' + [(m^2 - 1/4)/u^2 - 2E u^2 + s i g u^4] F = 4 Z F,

with s = +1 for the xi channel and s = -1 for the eta channel.  An energy E
is an eigenvalue when the separation constants satisfy Z1 + Z2 = 1.

Each channel is diagonalized in the orthonormal basis
u^(|m|+1/2) L_k^(|m|)(w u^2) exp(-w u^2 / 2), where the kinetic plus
centrifugal plus w^2 u^2 part is diagonal, 2w(2k + |m| + 1), and u^2 = t/w
is the tridiagonal Laguerre position matrix.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np
import scipy.linalg as sla

from .eigen import ConvergenceError
from .perturbation import ParabolicLabel, hydrogen_first_order

__all__ = [
    "ChannelOperator",
    "SeparationState",
    "BasisSizeWarning",
    "channel_eigenvalue",
    "quantization_residual",
    "solve_state",
    "scan_state",
    "default_frequency",
]

DEFAULT_BASIS_SIZE = 40


class BasisSizeWarning(UserWarning):
    """The channel basis is too small for the requested accuracy."""


def default_frequency(E):
    """Basis frequency |sqrt(-2E)|; equals sqrt(-2E) for bound real energies."""
    return float(abs(np.sqrt(-2.0 * complex(E))))


def _laguerre_position(size, a):
    """Truncations of t and t^2 in the normalized Laguerre basis of order a."""
    k = np.arange(size + 1)
    off = -np.sqrt((k[:-1] + 1.0) * (k[:-1] + a + 1.0))
    t = np.diag(2.0 * k + a + 1.0) + np.diag(off, 1) + np.diag(off, -1)
    # t is tridiagonal, so one extra row makes the truncated square exact
    return t[:size, :size], (t @ t)[:size, :size]


@dataclass(frozen=True)
class ChannelOperator:
    m: int
    E: complex
    g: float
    sign: int
    basis_size: int = DEFAULT_BASIS_SIZE
    basis_frequency: float = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.basis_size < 10:
            raise ValueError(f"basis_size must be >= 10, got {self.basis_size}")
        if self.basis_frequency is None:
            object.__setattr__(self, "basis_frequency", default_frequency(self.E))
        if not self.basis_frequency > 0:
            raise ValueError(f"basis_frequency must be > 0, got {self.basis_frequency}")

    def matrix(self):
        w = self.basis_frequency
        a = abs(self.m)
        t, t2 = _laguerre_position(self.basis_size, a)
        k = np.arange(self.basis_size)
        diag = 2.0 * w * (2.0 * k + a + 1.0)
        return (
            np.diag(diag).astype(complex)
            + ((-2.0 * self.E - w * w) / w) * t
            + (self.sign * 1j * self.g / w**2) * t2
        )

    def eigenvalues(self):
        try:
            return sla.eigvals(self.matrix(), check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"channel eigensolver failed: {exc}") from exc

    def closed_form(self, k):
        """Separation constant at g = 0: sqrt(-2E) (2k + |m| + 1) / 2."""
        return np.sqrt(-2.0 * complex(self.E)) * (2 * k + abs(self.m) + 1) / 2.0


def _nearest(values, reference):
    return values[np.argmin(np.abs(values - reference))]


def channel_eigenvalue(op, k, reference=None, check=False):
    """Separation constant Z of the k-th channel state.

    The eigenvalue of the channel matrix nearest ``4 * reference`` is
    selected; without a reference the g = 0 closed form is used, which orders
    the states by ascending real part at small g.  With ``check`` the value
    is recomputed in a doubled basis and a BasisSizeWarning is issued when it
    moves by more than 1e-9.
    """
    if reference is None:
        reference = op.closed_form(k)
    z = _nearest(op.eigenvalues(), 4.0 * reference) / 4.0
    if check:
        big = ChannelOperator(
            op.m, op.E, op.g, op.sign, 2 * op.basis_size, op.basis_frequency
        )
        z_big = _nearest(big.eigenvalues(), 4.0 * z) / 4.0
        if abs(z_big - z) > 1e-9:
            warnings.warn(
                f"channel basis of size {op.basis_size} is inadequate: "
                f"doubling moved Z by {abs(z_big - z):.2e}",
                BasisSizeWarning,
                stacklevel=2,
            )
    return z


def _channel_pair(label, E, g, basis_size, frequency, references):
    ref1, ref2 = references if references is not None else (None, None)
    op1 = ChannelOperator(label.m, E, g, +1, basis_size, frequency)
    op2 = ChannelOperator(label.m, E, g, -1, basis_size, frequency)
    return channel_eigenvalue(op1, label.n1, ref1), channel_eigenvalue(op2, label.n2, ref2)


def quantization_residual(label, E, g, basis_size=DEFAULT_BASIS_SIZE,
                          basis_frequency=None, references=None):
    """Z1(E) + Z2(E) - 1 for the channel states (n1, +) and (n2, -)."""
    if basis_frequency is None:
        basis_frequency = default_frequency(E)
    z1, z2 = _channel_pair(label, E, g, basis_size, basis_frequency, references)
    return z1 + z2 - 1.0


@dataclass
class SeparationState:
    label: ParabolicLabel
    g: float
    energy: complex
    z1: complex
    z2: complex
    residual: float
    iterations: int
    converged: bool = True
    basis_shift: float = None
    message: str = ""
    trace: list = field(default_factory=list, repr=False)

    @property
    def basis_ok(self):
        return self.basis_shift is None or self.basis_shift <= 1e-8


def first_order_seed(label, g):
    n = label.n
    return complex(-0.5 / n**2, hydrogen_first_order(label) * g)


def _secant(label, g, E0, basis_size, frequency, references, tol, max_iter):
    refs = list(references) if references is not None else None
    trace = []

    def f(E):
        nonlocal refs
        z1, z2 = _channel_pair(label, E, g, basis_size, frequency, refs)
        refs = [z1, z2]
        r = z1 + z2 - 1.0
        trace.append((E, abs(r)))
        return r, z1, z2

    bound = 10.0 * max(abs(E0), 1e-12)
    x0 = complex(E0)
    f0, z1, z2 = f(x0)
    if abs(f0) <= tol:
        return x0, z1, z2, abs(f0), 0, trace
    x1 = x0 + 1e-6 * max(abs(x0), 1e-3) * (1 + 1j)
    f1, z1, z2 = f(x1)
    for it in range(1, max_iter + 1):
        if abs(f1) <= tol:
            return x1, z1, z2, abs(f1), it, trace
        if f1 == f0:
            break
        x0, x1, f0 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1
        if abs(x1) > bound:
            raise ConvergenceError(
                f"basin escape for {label} at g={g}: |E| grew to {abs(x1):.3g}",
                iterations=it,
                trace=trace,
            )
        f1, z1, z2 = f(x1)
    raise ConvergenceError(
        f"secant did not converge for {label} at g={g} after {max_iter} iterations "
        f"(|residual| = {abs(f1):.2e})",
        iterations=max_iter,
        trace=trace,
    )


def solve_state(label, g, initial_energy=None, basis_size=DEFAULT_BASIS_SIZE,
                references=None, tol=1e-10, max_iter=50, check_basis=True):
    """Solve Z1(E) + Z2(E) = 1 for one parabolic state by complex secant.

    The basis frequency is fixed from the initial energy for the whole
    iteration so that the residual is a smooth function of E.

    Parameters
    ----------
    label : ParabolicLabel
    g : float
    initial_energy : complex, optional
        Defaults to the first-order estimate -1/(2n^2) + i (3/2) n q g.
    references : pair of complex, optional
        Separation constants to track channel eigenvalues from, typically
        those of a nearby converged state.
    check_basis : bool
        Re-solve in a doubled channel basis and store the energy change in
        ``basis_shift``.
    """
    g = float(g)
    if initial_energy is None:
        initial_energy = first_order_seed(label, g)
    frequency = default_frequency(initial_energy)
    E, z1, z2, res, its, trace = _secant(
        label, g, initial_energy, basis_size, frequency, references, tol, max_iter
    )
    state = SeparationState(label, g, E, z1, z2, res, its, trace=trace)
    if check_basis:
        try:
            E2, *_ = _secant(label, g, E, 2 * basis_size, frequency, (z1, z2), tol, max_iter)
            state.basis_shift = float(abs(E2 - E))
        except ConvergenceError:
            state.basis_shift = np.inf
    return state


def scan_state(label, g_grid, basis_size=DEFAULT_BASIS_SIZE, check_basis=True,
               tol=1e-10, max_iter=50):
    """Continuation over an ascending g grid; failures are recorded, not raised."""
    g_grid = np.asarray(g_grid, dtype=float)
    if g_grid.ndim != 1 or len(g_grid) == 0:
        raise ValueError("g_grid must be a non-empty 1-D sequence")
    if g_grid[0] < 0 or np.any(np.diff(g_grid) <= 0):
        raise ValueError("g_grid must be strictly ascending and start at g >= 0")
    states = []
    seed, refs = None, None
    for g in g_grid:
        try:
            state = solve_state(label, g, seed, basis_size, refs, tol, max_iter, check_basis)
        except ConvergenceError as exc:
            states.append(
                SeparationState(label, float(g), complex(np.nan, np.nan), np.nan, np.nan,
                                np.inf, exc.iterations or 0, converged=False,
                                message=str(exc), trace=exc.trace)
            )
            continue
        states.append(state)
        seed, refs = state.energy, (state.z1, state.z2)
    return states
