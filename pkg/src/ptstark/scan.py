"""Continuation in g: trajectory matching and exceptional-point location."""

from dataclasses import dataclass, field, replace

import numpy as np

from .eigen import ConvergenceError, solve_pencil
from .slater import MatrixPencil, PencilError

__all__ = [
    "OK",
    "AMBIGUOUS",
    "GAP",
    "GScan",
    "ExceptionalPointEstimate",
    "scan",
    "match_spectra",
    "detect_exceptional_points",
    "refine_exceptional_point",
    "estimate_gc",
]

OK = "ok"
AMBIGUOUS = "ambiguous-match"
GAP = "gap"

# relative window inside which two candidate displacements count as a tie
AMBIGUITY = 0.10
CONJUGATE_TOL = 1e-6


@dataclass
class GScan:
    """Eigenvalue trajectories over a grid of couplings.

    ``values[i, j]`` is trajectory i at ``g_grid[j]`` (NaN for gaps) and
    ``flags`` has the same shape.
    """

    g_grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    source: dict = field(default_factory=dict)
    labels: list = None

    @property
    def n_trajectories(self):
        return self.values.shape[0]

    def trajectory(self, i):
        return self.values[i]

    def is_real(self, im_tol=1e-8):
        """Boolean mask of finite entries with |Im E| <= im_tol."""
        return np.isfinite(self.values) & (np.abs(self.values.imag) <= im_tol)


@dataclass
class ExceptionalPointEstimate:
    trajectory_pair: tuple
    g_lower: float
    g_upper: float
    g_estimate: float
    min_gap: float
    refined: bool = False
    values_lower: tuple = None
    message: str = ""
    labels: tuple = None


def _as_solver(solver):
    if isinstance(solver, MatrixPencil):
        return lambda g: solve_pencil(solver, g)
    if hasattr(solver, "spectrum"):
        return solver.spectrum
    if callable(solver):
        return solver
    raise TypeError(f"cannot use {type(solver).__name__} as a spectrum solver")


def _solve_or_none(solve, g):
    try:
        return solve(g)
    except (ConvergenceError, PencilError, np.linalg.LinAlgError):
        return None


def _rank(values):
    order = np.lexsort((values.imag, values.real))
    rank = np.empty(len(values), dtype=int)
    rank[order] = np.arange(len(values))
    return rank


def _assign(prev, cur):
    """Greedy nearest-neighbour assignment of ``prev`` onto ``cur``.

    Ties in displacement are broken by the (Re, Im) rank on both sides, so a
    real pair entering a conjugate pair maps lower-to-lower and the matching
    is the same whichever direction the grid is walked.
    """
    n_prev = len(prev)
    valid = np.flatnonzero(np.isfinite(cur))
    target = np.full(n_prev, -1)
    ambiguous = np.zeros(n_prev, dtype=bool)
    if len(valid) == 0:
        return target, ambiguous
    dist = np.abs(prev[:, None] - cur[None, valid])
    prev_rank = _rank(prev)
    cur_rank = _rank(cur[valid])
    ii, jj = np.meshgrid(np.arange(n_prev), np.arange(len(valid)), indexing="ij")
    keys = np.lexsort((cur_rank[jj].ravel(), prev_rank[ii].ravel(), np.round(dist, 12).ravel()))
    used_prev = np.zeros(n_prev, dtype=bool)
    used_cur = np.zeros(len(valid), dtype=bool)
    for key in keys:
        i, j = divmod(int(key), len(valid))
        if used_prev[i] or used_cur[j]:
            continue
        used_prev[i] = used_cur[j] = True
        target[i] = valid[j]
        d = np.sort(dist[i])
        if len(d) > 1 and d[1] > 1e-12 and d[1] <= (1 + AMBIGUITY) * d[0]:
            ambiguous[i] = True
        if used_prev.all() or used_cur.all():
            break
    return target, ambiguous


def match_spectra(spectra, n_track=None):
    """Link spectra, given in walking order, into trajectories.

    ``spectra`` may contain None for failed solves.  When every spectrum
    carries state labels, trajectories follow the labels; otherwise they are
    matched by greedy nearest neighbour.  Returns (values, flags, labels)
    with arrays of shape (n_track, len(spectra)).
    """
    n = len(spectra)
    solved = [s for s in spectra if s is not None]
    if solved and all(s.labels is not None for s in solved):
        return _match_by_label(spectra, n_track)
    first = next((s for s in solved if np.isfinite(s.eigenvalues).any()), None)
    if first is None:
        n_track = n_track or 0
        return (
            np.full((n_track, n), np.nan + 0j),
            np.full((n_track, n), GAP, dtype=object),
            None,
        )
    start = np.asarray(first.eigenvalues)
    start = start[np.isfinite(start)]
    start = start[np.lexsort((start.imag, start.real))]
    if n_track is None:
        n_track = len(start)
    n_track = min(n_track, len(start))
    values = np.full((n_track, n), np.nan + 0j)
    flags = np.full((n_track, n), GAP, dtype=object)
    prev = start[:n_track].astype(complex)
    for j, spec in enumerate(spectra):
        if spec is None:
            continue
        cur = np.asarray(spec.eigenvalues, dtype=complex)
        target, ambiguous = _assign(prev, cur)
        for i in range(n_track):
            if target[i] < 0:
                continue
            values[i, j] = cur[target[i]]
            flags[i, j] = AMBIGUOUS if ambiguous[i] else OK
            prev[i] = values[i, j]
    return values, flags, None


def _match_by_label(spectra, n_track):
    first = next(s for s in spectra if s is not None)
    labels = list(first.labels)
    if n_track is not None:
        labels = labels[:n_track]
    position = {lab: i for i, lab in enumerate(labels)}
    values = np.full((len(labels), len(spectra)), np.nan + 0j)
    flags = np.full((len(labels), len(spectra)), GAP, dtype=object)
    for j, spec in enumerate(spectra):
        if spec is None:
            continue
        for lab, e in zip(spec.labels, spec.eigenvalues):
            i = position.get(lab)
            if i is not None and np.isfinite(e):
                values[i, j] = e
                flags[i, j] = OK
    return values, flags, labels


def scan(solver, g_grid, n_track=None, source=None):
    """Solve at every g and match the lowest ``n_track`` trajectories.

    ``solver`` is a MatrixPencil, an object with a ``spectrum(g)`` method
    (the estimators in :mod:`ptstark.estimators`) or a callable g -> Spectrum.
    """
    g_grid = np.asarray(g_grid, dtype=float)
    if g_grid.ndim != 1:
        raise ValueError("g_grid must be one-dimensional")
    if len(g_grid) and (g_grid[0] < 0 or np.any(np.diff(g_grid) <= 0)):
        raise ValueError("g_grid must be strictly ascending and start at g >= 0")
    solve = _as_solver(solver)
    spectra = [_solve_or_none(solve, g) for g in g_grid]
    values, flags, labels = match_spectra(spectra, n_track)
    if source is None:
        source = _describe(solver)
    return GScan(g_grid=g_grid, values=values, flags=flags, source=source, labels=labels)


def _describe(solver):
    if hasattr(solver, "get_params"):
        return {"solver": type(solver).__name__, **solver.get_params()}
    if isinstance(solver, MatrixPencil):
        desc = {"solver": "MatrixPencil", "dim": solver.dim}
        if solver.basis is not None:
            desc.update(vars(solver.basis))
        if solver.potential_kind is not None:
            desc["potential"] = solver.potential_kind
        return desc
    return {"solver": getattr(solver, "__name__", type(solver).__name__)}


def _is_conjugate_pair(a, b, im_tol):
    return (
        abs(a.imag) > im_tol
        and abs(b.imag) > im_tol
        and abs(a - np.conj(b)) <= CONJUGATE_TOL * max(1.0, abs(a))
    )


def detect_exceptional_points(gscan, im_tol=1e-7):
    """Bracket every point where a real pair of trajectories turns complex."""
    V = gscan.values
    g = gscan.g_grid
    found = []
    for a in range(gscan.n_trajectories):
        for b in range(a + 1, gscan.n_trajectories):
            for j in range(len(g) - 1):
                ea, eb, fa, fb = V[a, j], V[b, j], V[a, j + 1], V[b, j + 1]
                if not np.all(np.isfinite([ea, eb, fa, fb])):
                    continue
                if abs(ea.imag) > im_tol or abs(eb.imag) > im_tol:
                    continue
                if not _is_conjugate_pair(fa, fb, im_tol):
                    continue
                gaps = np.abs(V[a, : j + 2] - V[b, : j + 2])
                found.append(
                    ExceptionalPointEstimate(
                        trajectory_pair=(a, b),
                        g_lower=float(g[j]),
                        g_upper=float(g[j + 1]),
                        g_estimate=0.5 * float(g[j] + g[j + 1]),
                        min_gap=float(np.nanmin(gaps)),
                        values_lower=(complex(ea), complex(eb)),
                        labels=None if gscan.labels is None
                        else (gscan.labels[a], gscan.labels[b]),
                    )
                )
    found.sort(key=lambda e: (e.g_upper, e.trajectory_pair))
    return found


def _locate(values, pair):
    """Indices in ``values`` of the two entries nearest to ``pair``."""
    target, _ = _assign(np.asarray(pair, dtype=complex), np.asarray(values, dtype=complex))
    return target


def refine_exceptional_point(solver, estimate, tol_g=1e-6, im_tol=1e-7, max_iter=200,
                             substeps=4):
    """Bisect the bracket on whether the tracked pair is still real.

    The whole spectrum is carried from g_lower to each midpoint, in
    ``substeps`` matching steps, so nearby eigenvalues cannot capture the
    pair.  Labelled spectra are followed by label instead.
    """
    if estimate.g_upper - estimate.g_lower <= tol_g:
        return replace(estimate, refined=True)
    if estimate.labels is not None:
        return _refine_by_label(_as_solver(solver), estimate, tol_g, im_tol, max_iter)
    if estimate.values_lower is None:
        return replace(estimate, message="no pair values at g_lower; cannot refine")
    solve = _as_solver(solver)
    lo, hi = estimate.g_lower, estimate.g_upper
    start = _solve_or_none(solve, lo)
    if start is None:
        return replace(estimate, message=f"solver failed at g={lo}")
    tracked = np.asarray(start.eigenvalues, dtype=complex)
    tracked = tracked[np.isfinite(tracked)]
    idx = _locate(tracked, estimate.values_lower)
    if np.any(idx < 0):
        return replace(estimate, message=f"pair not found at g={lo}")
    min_gap = estimate.min_gap
    for _ in range(max_iter):
        if hi - lo <= tol_g:
            break
        mid = 0.5 * (lo + hi)
        walked = tracked
        for step in range(1, substeps + 1):
            g_step = lo + (mid - lo) * step / substeps
            spec = _solve_or_none(solve, g_step)
            if spec is None:
                return replace(estimate, message=f"solver failed at g={g_step}")
            cur = np.asarray(spec.eigenvalues, dtype=complex)
            target, _ = _assign(walked, cur)
            if target[idx[0]] < 0 or target[idx[1]] < 0:
                return replace(estimate, message=f"tracking lost at g={g_step}")
            walked = np.where(target >= 0, cur[np.maximum(target, 0)], walked)
        a, b = walked[idx[0]], walked[idx[1]]
        min_gap = min(min_gap, abs(a - b))
        if abs(a.imag) <= im_tol and abs(b.imag) <= im_tol:
            lo, tracked = mid, walked
        elif _is_conjugate_pair(a, b, im_tol):
            hi = mid
        else:
            return replace(
                estimate, message=f"tracked pair is neither real nor conjugate at g={mid}"
            )
    return replace(
        estimate,
        g_lower=lo,
        g_upper=hi,
        g_estimate=0.5 * (lo + hi),
        min_gap=min_gap,
        refined=True,
        values_lower=(complex(tracked[idx[0]]), complex(tracked[idx[1]])),
    )


def _refine_by_label(solve, estimate, tol_g, im_tol, max_iter):
    lo, hi = estimate.g_lower, estimate.g_upper
    min_gap, pair_lo = estimate.min_gap, estimate.values_lower
    for _ in range(max_iter):
        if hi - lo <= tol_g:
            break
        mid = 0.5 * (lo + hi)
        spec = _solve_or_none(solve, mid)
        if spec is None or spec.labels is None:
            return replace(estimate, message=f"solver failed at g={mid}")
        by_label = dict(zip(spec.labels, spec.eigenvalues))
        if any(lab not in by_label for lab in estimate.labels):
            return replace(estimate, message=f"tracking lost at g={mid}")
        a, b = (complex(by_label[lab]) for lab in estimate.labels)
        min_gap = min(min_gap, abs(a - b))
        if abs(a.imag) <= im_tol and abs(b.imag) <= im_tol:
            lo, pair_lo = mid, (a, b)
        elif _is_conjugate_pair(a, b, im_tol):
            hi = mid
        else:
            return replace(
                estimate, message=f"tracked pair is neither real nor conjugate at g={mid}"
            )
    return replace(estimate, g_lower=lo, g_upper=hi, g_estimate=0.5 * (lo + hi),
                   min_gap=min_gap, refined=True, values_lower=pair_lo)


def estimate_gc(estimates):
    """Smallest refined exceptional point, or None."""
    refined = [e.g_estimate for e in estimates if e.refined]
    return min(refined) if refined else None
