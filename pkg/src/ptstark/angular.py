"""Angular algebra for the z = r cos(theta) coupling between spherical harmonics."""

from dataclasses import dataclass
from math import sqrt

__all__ = [
    "SphericalLabel",
    "cos_theta_element",
    "parity_eigenvalue",
    "selection_allowed",
    "degeneracy",
]


@dataclass(frozen=True)
class SphericalLabel:
    """Central-field quantum numbers (nu, l, m)."""

    nu: int
    l: int  # noqa: E741
    m: int

    def __post_init__(self):
        if self.nu < 0 or self.l < 0:
            raise ValueError(f"nu and l must be non-negative, got {self}")
        if abs(self.m) > self.l:
            raise ValueError(f"|m| must not exceed l, got {self}")

    @property
    def parity(self):
        return parity_eigenvalue(self.l)


def cos_theta_element(l, lp, m):
    """Return <Y_lp^m| cos(theta) |Y_l^m>.

    Only |l - lp| = 1 couples; with L = min(l, lp) the value is
    sqrt(((L+1)^2 - m^2) / ((2L+1)(2L+3))).
    """
    if l < 0 or lp < 0:
        raise ValueError(f"l and lp must be non-negative, got l={l}, lp={lp}")
    if abs(m) > min(l, lp):
        raise ValueError(f"|m|={abs(m)} exceeds min(l, lp)={min(l, lp)}")
    if abs(l - lp) != 1:
        return 0.0
    L = min(l, lp)
    return sqrt(((L + 1) ** 2 - m * m) / ((2 * L + 1) * (2 * L + 3)))


def parity_eigenvalue(l):
    return -1 if l % 2 else 1


def selection_allowed(l, lp, m, mp):
    """True iff <l m| z |lp mp> can be nonzero."""
    return m == mp and abs(l - lp) == 1


_MODELS = ("oscillator", "hydrogen", "generic-central")


def degeneracy(model, level):
    """Degeneracy of an unperturbed level.

    Parameters
    ----------
    model : {"oscillator", "hydrogen", "generic-central"}
    level : int
        Shell index k for the oscillator, principal number n for hydrogen,
        orbital number l for a generic central field (the 2l+1 lower bound).
    """
    if model == "oscillator":
        if level < 0:
            raise ValueError(f"oscillator shell k must be >= 0, got {level}")
        return (level + 1) * (level + 2) // 2
    if model == "hydrogen":
        if level <= 0:
            raise ValueError(f"hydrogen principal number must be >= 1, got {level}")
        return level * level
    if model == "generic-central":
        if level < 0:
            raise ValueError(f"l must be >= 0, got {level}")
        return 2 * level + 1
    raise ValueError(f"unknown model {model!r}; expected one of {_MODELS}")
