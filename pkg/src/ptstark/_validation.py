"""Input checks shared by the estimators and the CLI."""

import numbers

import numpy as np
from sklearn.utils import check_array, check_scalar


def check_couplings(X):
    """Coerce g values to a finite 1-D float array.

    Accepts a scalar, a 1-D sequence or a single-column 2-D array.
    """
    if np.isscalar(X):
        X = [X]
    arr = check_array(X, ensure_2d=False, dtype=float, input_name="g")
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single column of g values, got shape {arr.shape}")
        arr = arr[:, 0]
    return arr


def check_int(value, name, min_val=None):
    check_scalar(value, name, target_type=numbers.Integral, min_val=min_val)
    return int(value)


def check_positive(value, name):
    check_scalar(value, name, target_type=numbers.Real, min_val=0, include_boundaries="neither")
    return float(value)


def check_grid(g_min, g_max, g_steps):
    g_steps = check_int(g_steps, "g_steps", 1)
    if g_min < 0:
        raise ValueError(f"g_min must be >= 0, got {g_min}")
    if g_steps > 1 and not g_max > g_min:
        raise ValueError(f"g_max must exceed g_min, got [{g_min}, {g_max}]")
    return np.linspace(g_min, g_max, g_steps)
