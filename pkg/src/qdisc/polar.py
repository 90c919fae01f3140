"""Polar decomposition of quantum-disc elements.

Every distribution decomposes uniquely as

    f = sum_{m>0} z^m psi_m(y) + psi_0(y) + sum_{m>0} psi_{-m}(y) z*^m

with y = 1 - z z* and radial coefficients psi_m living on the lattice
y = q^(2n).  ``PolarFunction`` stores the sample vectors, plus closed
polynomial forms in y whenever available so the algebraic operations stay
exact.  Products are evaluated with the commutation rules

    z f(y) = f(q^(-2) y) z,      z* f(y) = f(q^2 y) z*,
    z^c f(y) z*^c = f(q^(-2c) y) prod_{i<c} (1 - q^(-2i) y),
    z*^c z^c = (q^2 y; q^2)_c,

which on the lattice are index shifts and Pochhammer grids; off-lattice
arguments only ever occur multiplied by a vanishing factor and are set to 0.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from .context import QContext, down_poch_grid, up_poch_grid
from .errors import AngularOverflow, NotPolynomial
from .ncpoly import NormalPoly


def _shift(arr, s):
    """Samples of psi(q^(2s) y): out[n] = arr[n+s], out of range -> 0."""
    if s == 0:
        return arr.copy()
    out = np.zeros_like(arr)
    if s > 0:
        out[: max(arr.size - s, 0)] = arr[s:]
    else:
        out[-s:] = arr[: arr.size + s]
    return out


def poly_scale_arg(coeffs, q, s):
    """Coefficients of psi(q^(2s) y) given those of psi(y)."""
    powers = q ** (2.0 * s * np.arange(coeffs.size))
    return coeffs * powers


def down_poch_poly(q, c, dtype=complex):
    """Coefficients of prod_{i<c} (1 - q^(-2i) y)."""
    out = np.array([1.0], dtype=dtype)
    for i in range(c):
        out = npoly.polymul(out, np.array([1.0, -(q ** (-2 * i))], dtype=dtype))
    return out


def up_poch_poly(q, shift, c, dtype=complex):
    """Coefficients of prod_{i<c} (1 - q^(2 shift + 2 + 2i) y)."""
    out = np.array([1.0], dtype=dtype)
    for i in range(c):
        out = npoly.polymul(out, np.array([1.0, -(q ** (2 * shift + 2 + 2 * i))], dtype=dtype))
    return out


class PolarFunction:
    """Angular-mode map m -> radial samples (and optional polynomials)."""

    __slots__ = ("q", "levels", "modes", "polys")

    def __init__(self, q, levels, modes, polys=None):
        self.q = float(q)
        self.levels = int(levels)
        self.modes = {}
        for m, arr in modes.items():
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != (self.levels,):
                raise ValueError("sample vectors must have length `levels`")
            if np.any(arr != 0.0):
                self.modes[int(m)] = arr
        if polys is None:
            self.polys = None
        else:
            self.polys = {
                int(m): np.asarray(c, dtype=complex)
                for m, c in polys.items()
                if int(m) in self.modes
            }

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ctx: QContext):
        return cls(ctx.q, ctx.levels, {}, {})

    @classmethod
    def one(cls, ctx: QContext):
        return cls.from_poly(ctx, 0, [1.0])

    @classmethod
    def from_poly(cls, ctx: QContext, mode, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex)
        samples = npoly.polyval(ctx.lattice(), coeffs)
        return cls(ctx.q, ctx.levels, {mode: samples}, {mode: coeffs})

    @classmethod
    def from_samples(cls, ctx: QContext, mode, samples):
        return cls(ctx.q, ctx.levels, {mode: samples})

    @classmethod
    def delta(cls, ctx: QContext, mode, level, value=1.0):
        """Finite function supported on a single (mode, lattice level)."""
        arr = np.zeros(ctx.levels, dtype=complex)
        arr[level] = value
        return cls(ctx.q, ctx.levels, {mode: arr})

    # -- basic structure --------------------------------------------------
    @property
    def exact(self):
        return self.polys is not None

    def mode(self, m):
        arr = self.modes.get(m)
        if arr is None:
            return np.zeros(self.levels, dtype=complex)
        return arr

    def _check(self, other):
        if self.q != other.q or self.levels != other.levels:
            raise ValueError("mixing polar functions from different contexts")

    def __add__(self, other):
        self._check(other)
        modes = dict(self.modes)
        for m, arr in other.modes.items():
            modes[m] = modes.get(m, 0.0) + arr
        polys = None
        if self.exact and other.exact:
            polys = dict(self.polys)
            for m, c in other.polys.items():
                polys[m] = npoly.polyadd(polys[m], c) if m in polys else c
        return PolarFunction(self.q, self.levels, modes, polys)

    def __sub__(self, other):
        return self + other * (-1.0)

    def __mul__(self, other):
        if isinstance(other, PolarFunction):
            return polar_multiply(self, other)
        modes = {m: other * arr for m, arr in self.modes.items()}
        polys = None
        if self.exact:
            polys = {m: other * c for m, c in self.polys.items()}
        return PolarFunction(self.q, self.levels, modes, polys)

    __rmul__ = __mul__

    def star(self):
        """Involution: (z^m psi(y))* = conj(psi)(y) z*^m."""
        modes = {-m: np.conj(arr) for m, arr in self.modes.items()}
        polys = None
        if self.exact:
            polys = {-m: np.conj(c) for m, c in self.polys.items()}
        return PolarFunction(self.q, self.levels, modes, polys)

    def max_abs(self):
        return max((np.max(np.abs(a)) for a in self.modes.values()), default=0.0)

    def max_abs_diff(self, other):
        self._check(other)
        keys = set(self.modes) | set(other.modes)
        return max(
            (np.max(np.abs(self.mode(m) - other.mode(m))) for m in keys),
            default=0.0,
        )

    def support_size(self):
        return sum(int(np.count_nonzero(a)) for a in self.modes.values())

    def __repr__(self):
        ms = sorted(self.modes)
        return f"PolarFunction(q={self.q}, levels={self.levels}, modes={ms})"


def _mult_term(q, levels, m, psi, k, phi, ctx):
    """Samples of E(m, psi) * E(k, phi) -> (mode, samples)."""
    if m >= 0 and k >= 0:
        return m + k, _shift(psi, k) * phi
    if m < 0 and k < 0:
        return m + k, psi * _shift(phi, -m)
    if m >= 0 and k < 0:
        r = -k
        c = min(m, r)
        h = psi * phi
        grid = down_poch_grid(ctx, c, length=levels)[:, c]
        return m + k, _shift(h, -c) * grid
    # m < 0, k >= 0
    p = -m
    c = min(p, k)
    d = abs(k - p)
    grid = up_poch_grid(ctx, c, shift=d, length=levels)[:, c]
    return k - p, _shift(psi, max(k - p, 0)) * grid * _shift(phi, max(p - k, 0))


def _mult_term_poly(q, m, cpsi, k, cphi):
    """Closed-form counterpart of :func:`_mult_term`."""
    if m >= 0 and k >= 0:
        return m + k, npoly.polymul(poly_scale_arg(cpsi, q, k), cphi)
    if m < 0 and k < 0:
        return m + k, npoly.polymul(cpsi, poly_scale_arg(cphi, q, -m))
    if m >= 0 and k < 0:
        c = min(m, -k)
        h = npoly.polymul(cpsi, cphi)
        return m + k, npoly.polymul(poly_scale_arg(h, q, -c), down_poch_poly(q, c))
    p = -m
    c = min(p, k)
    d = abs(k - p)
    out = npoly.polymul(poly_scale_arg(cpsi, q, max(k - p, 0)), up_poch_poly(q, d, c))
    return k - p, npoly.polymul(out, poly_scale_arg(cphi, q, max(p - k, 0)))


def polar_multiply(a: PolarFunction, b: PolarFunction, ctx=None) -> PolarFunction:
    """Product of two polar functions, result in polar normal form."""
    a._check(b)
    if ctx is None:
        ctx = QContext(q=a.q, levels=a.levels)
    modes = {}
    for m, psi in a.modes.items():
        for k, phi in b.modes.items():
            mode, samples = _mult_term(a.q, a.levels, m, psi, k, phi, ctx)
            if mode in modes:
                modes[mode] = modes[mode] + samples
            else:
                modes[mode] = samples
    polys = None
    if a.exact and b.exact:
        polys = {}
        for m, cpsi in a.polys.items():
            for k, cphi in b.polys.items():
                mode, c = _mult_term_poly(a.q, m, cpsi, k, cphi)
                polys[mode] = npoly.polyadd(polys[mode], c) if mode in polys else c
        # sample shifts lose the top lattice levels; closed forms do not,
        # so exact products are resampled from the polynomials
        lattice = ctx.lattice()[: a.levels]
        modes = {m: npoly.polyval(lattice, c) for m, c in polys.items()}
    return PolarFunction(a.q, a.levels, modes, polys)


def to_polar(f: NormalPoly, ctx: QContext) -> PolarFunction:
    """Unique polar decomposition of a normal-ordered polynomial.

    z^j z*^k contributes to mode j - k with radial polynomial
    prod_{i<min(j,k)} (1 - q^(-2i) y).
    """
    if f.q != ctx.q:
        raise ValueError("polynomial and context disagree on q")
    polys = {}
    for (j, k), coeff in f.coeffs.items():
        mode = j - k
        if abs(mode) > ctx.mode_cutoff:
            raise AngularOverflow(
                f"monomial z^{j} z*^{k} exceeds angular cutoff {ctx.mode_cutoff}"
            )
        c = coeff * down_poch_poly(ctx.q, min(j, k))
        polys[mode] = npoly.polyadd(polys[mode], c) if mode in polys else c
    lattice = ctx.lattice()
    modes = {m: npoly.polyval(lattice, c) for m, c in polys.items()}
    return PolarFunction(ctx.q, ctx.levels, modes, polys)


def from_polar(p: PolarFunction, ctx: QContext) -> NormalPoly:
    """Inverse of :func:`to_polar`; requires closed polynomial radial parts."""
    if not p.exact:
        raise NotPolynomial("polar function has sample data only")
    q = p.q
    out = NormalPoly.zero(q)
    y = NormalPoly.y(q)
    max_deg = max((c.size - 1 for c in p.polys.values()), default=0)
    ypow = [NormalPoly.unit(q)]
    for _ in range(max_deg):
        ypow.append(ypow[-1] * y)
    for m, coeffs in p.polys.items():
        radial = NormalPoly.zero(q)
        for i, ci in enumerate(coeffs):
            if ci != 0:
                radial = radial + ci * ypow[i]
        if m >= 0:
            out = out + NormalPoly.monomial(m, 0, q) * radial
        else:
            out = out + radial * NormalPoly.monomial(0, -m, q)
    return out


def pairing_weights(ctx: QContext, mode, measure, length=None):
    """Diagonal weights W with <f, g> = sum_n W[n] f[n] conj(g[n]) on a mode.

    measure: 'mu' for the Lebesgue integral, 'nu' for the invariant one.
    """
    n = ctx.levels if length is None else length
    sign = {"mu": 1.0, "nu": -1.0}[measure]
    idx = np.arange(n) + max(0, -mode)
    poch = up_poch_grid(ctx, abs(mode), length=n)[:, abs(mode)]
    return (1.0 - ctx.q2) * poch * ctx.q ** (sign * 2.0 * idx)


def polar_inner(f: PolarFunction, g: PolarFunction, measure, ctx: QContext):
    """Sesquilinear product int g* f against mu or nu (modes pair diagonally)."""
    f._check(g)
    total = 0.0 + 0.0j
    for m in set(f.modes) & set(g.modes):
        w = pairing_weights(ctx, m, measure)
        total += np.sum(w * f.mode(m) * np.conj(g.mode(m)))
    return total
