"""Deformation/truncation context shared by every numerical routine."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QContext:
    """Deformation parameter and truncation sizes.

    Attributes
    ----------
    q : float
        Deformation parameter, 0 < q < 1.
    levels : int
        Number of radial lattice points y = q^(2n), n = 0 .. levels-1.
    mode_cutoff : int
        Largest retained |angular index|.
    series_tol : float
        Tail tolerance for infinite products and series.
    green_terms : int
        Number of terms kept in the Green-function series.
    quad_nodes : int
        Gauss-Legendre node count for the spectral-parameter quadrature.
    star_order : int
        Default truncation order of the deformation series.
    degree_cap : int
        Generator-power cap for parsed expressions and kernel terms.
    precision : str
        Scalar precision selector (complex dtype name).
    """

    q: float = 0.5
    levels: int = 64
    mode_cutoff: int = 16
    series_tol: float = 1e-14
    green_terms: int = 40
    quad_nodes: int = 128
    star_order: int = 4
    degree_cap: int = 128
    precision: str = "complex128"

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0, 1), got {self.q}")
        if self.levels < 2:
            raise ValueError("levels must be at least 2")
        if self.mode_cutoff < 0:
            raise ValueError("mode_cutoff must be nonnegative")
        if self.series_tol <= 0:
            raise ValueError("series_tol must be positive")
        np.dtype(self.precision)

    @property
    def q2(self):
        return self.q * self.q

    @property
    def dtype(self):
        return np.dtype(self.precision)

    def lattice(self):
        """Radial lattice q^(2n), n = 0 .. levels-1."""
        return self.q ** (2.0 * np.arange(self.levels))


def down_poch_grid(ctx, count, length=None):
    """Matrix P[n, i] = (q^(2n); q^(-2))_i for i = 0..count, n = 0..length-1.

    P[n, i] vanishes for i > n, which is what truncates lattice expansions.
    """
    n = ctx.levels if length is None else length
    out = np.empty((n, count + 1), dtype=ctx.dtype)
    out[:, 0] = 1.0
    lat = ctx.q ** (2.0 * np.arange(n))
    for i in range(1, count + 1):
        out[:, i] = out[:, i - 1] * (1.0 - lat * ctx.q ** (-2 * (i - 1)))
    return out


def up_poch_grid(ctx, count, shift=0, length=None):
    """Matrix P[n, i] = (q^(2(n+shift)+2); q^2)_i for i = 0..count."""
    n = ctx.levels if length is None else length
    out = np.empty((n, count + 1), dtype=ctx.dtype)
    out[:, 0] = 1.0
    lat = ctx.q ** (2.0 * (np.arange(n) + shift) + 2.0)
    for i in range(count):
        out[:, i + 1] = out[:, i] * (1.0 - lat * ctx.q ** (2 * i))
    return out
