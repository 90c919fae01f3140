"""Differential calculus on the quantum disc.

Forms are kept in the normal shape

    omega = f00 + dz f10 + f01 dz* + dz f11 dz*

with dz leftmost and dz* rightmost.  The rewriting moves are

    dz z = q^2 z dz,    dz z* = q^(-2) z* dz,
    dz* z = q^2 z dz*,  dz* z* = q^(-2) z* dz*,
    dz dz* = -q^(-2) dz* dz,   dz dz = dz* dz* = 0,

so commuting dz (or dz*) through a monomial z^j z*^k only scales it.
Both the exact engine on normal polynomials and the lattice-level
difference formulas for polar coefficients live here; the two are
cross-checked in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .context import QContext
from .ncpoly import NormalPoly, involution
from .polar import PolarFunction, poly_scale_arg

from numpy.polynomial import polynomial as npoly


def _cfac(q, n):
    """c_n = sum_{i<n} q^(-2i); the twisted integer in both partial derivatives."""
    return sum(q ** (-2 * i) for i in range(n))


def _scale_sigma(f: NormalPoly, power) -> NormalPoly:
    """Scale each monomial z^j z*^k by q^(2 power (j-k))."""
    q = f.q
    return NormalPoly(
        {(j, k): c * q ** (2 * power * (j - k)) for (j, k), c in f.coeffs.items()},
        q,
    )


def del_l_z(f: NormalPoly) -> NormalPoly:
    """Left z-derivative: the coefficient in del f = dz (del_l f / del z)."""
    q = f.q
    return NormalPoly(
        {(j - 1, k): c * _cfac(q, j) for (j, k), c in f.coeffs.items() if j > 0}, q
    )


def del_r_zs(f: NormalPoly) -> NormalPoly:
    """Right z*-derivative: the coefficient in dbar f = (del_r f / del z*) dz*."""
    q = f.q
    return NormalPoly(
        {(j, k - 1): c * _cfac(q, k) for (j, k), c in f.coeffs.items() if k > 0}, q
    )


def del_r_z(f: NormalPoly) -> NormalPoly:
    return _scale_sigma(del_l_z(f), 1)


def del_l_zs(f: NormalPoly) -> NormalPoly:
    return _scale_sigma(del_r_zs(f), -1)


def partial_derivatives(f: NormalPoly):
    """All four partial derivatives of a degree-(0,0) element.

    Returns a dict with keys 'lz', 'rz', 'lzs', 'rzs'.
    """
    lz = del_l_z(f)
    rzs = del_r_zs(f)
    return {"lz": lz, "rz": _scale_sigma(lz, 1), "lzs": _scale_sigma(rzs, -1), "rzs": rzs}


@dataclass
class DiffForm:
    """Bigraded form with normal polynomial coefficients."""

    f00: NormalPoly
    f10: NormalPoly
    f01: NormalPoly
    f11: NormalPoly

    @classmethod
    def zero(cls, q):
        z = NormalPoly.zero(q)
        return cls(z, z, z, z)

    @classmethod
    def scalar(cls, f: NormalPoly):
        z = NormalPoly.zero(f.q)
        return cls(f, z, z, z)

    @classmethod
    def dz(cls, f: NormalPoly):
        """dz * f."""
        z = NormalPoly.zero(f.q)
        return cls(z, f, z, z)

    @classmethod
    def dzs(cls, f: NormalPoly):
        """f * dz*."""
        z = NormalPoly.zero(f.q)
        return cls(z, z, f, z)

    @classmethod
    def volume(cls, f: NormalPoly):
        """dz * f * dz*."""
        z = NormalPoly.zero(f.q)
        return cls(z, z, z, f)

    @property
    def q(self):
        return self.f00.q

    def __add__(self, other):
        return DiffForm(
            self.f00 + other.f00,
            self.f10 + other.f10,
            self.f01 + other.f01,
            self.f11 + other.f11,
        )

    def __sub__(self, other):
        return self + other * (-1.0)

    def __mul__(self, other):
        if isinstance(other, DiffForm):
            return form_multiply(self, other)
        return DiffForm(
            self.f00 * other, self.f10 * other, self.f01 * other, self.f11 * other
        )

    __rmul__ = __mul__

    def star(self):
        return DiffForm(
            involution(self.f00),
            involution(self.f01),
            involution(self.f10),
            involution(self.f11),
        )

    def max_abs_diff(self, other):
        return max(
            self.f00.max_abs_diff(other.f00),
            self.f10.max_abs_diff(other.f10),
            self.f01.max_abs_diff(other.f01),
            self.f11.max_abs_diff(other.f11),
        )

    def is_zero(self, tol=0.0):
        return all(
            all(abs(c) <= tol for c in comp.coeffs.values())
            for comp in (self.f00, self.f10, self.f01, self.f11)
        )


def form_multiply(a: DiffForm, b: DiffForm) -> DiffForm:
    """Product in the form algebra; bidegree beyond (1,1) is annihilated
    by dz^2 = dz*^2 = 0."""
    sig = lambda f: _scale_sigma(f, 1)   # dz* f = sig(f) dz*,  dz f = sig(f) dz
    tau = lambda f: _scale_sigma(f, -1)  # f dz = dz tau(f),    f dz* = dz* tau(f)
    q2 = a.q * a.q
    f00 = a.f00 * b.f00
    f10 = a.f10 * b.f00 + tau(a.f00) * b.f10
    f01 = a.f01 * sig(b.f00) + a.f00 * b.f01
    f11 = (
        a.f10 * b.f01
        - q2 * (tau(a.f01) * sig(b.f10))
        + a.f11 * sig(b.f00)
        + tau(a.f00) * b.f11
    )
    return DiffForm(f00, f10, f01, f11)


def dbar_form(w: DiffForm) -> DiffForm:
    """Antiholomorphic part of the exterior derivative."""
    z = NormalPoly.zero(w.q)
    return DiffForm(z, z, del_r_zs(w.f00), -1.0 * del_r_zs(w.f10))


def del_form(w: DiffForm) -> DiffForm:
    """Holomorphic part of the exterior derivative."""
    z = NormalPoly.zero(w.q)
    return DiffForm(z, del_l_z(w.f00), z, del_l_z(w.f01))


def exterior_d(w: DiffForm):
    """Exterior derivative with its bidegree split: returns (d, del, dbar)."""
    hol = del_form(w)
    anti = dbar_form(w)
    return hol + anti, hol, anti


# -- lattice-level calculus on polar coefficients -------------------------

def _qdiff(psi, ctx):
    """(D psi)[n] = (psi[n] - psi[n+1]) / ((1-q^2) q^(2n)); psi[N] = 0."""
    nxt = np.zeros_like(psi)
    nxt[:-1] = psi[1:]
    lat = ctx.lattice()
    return (psi - nxt) / ((1.0 - ctx.q2) * lat)


def _qdiff_back(psi, ctx):
    """(D psi)(q^(-2) y) on the lattice: value at n uses levels n-1, n; row 0 is
    only ever used against the vanishing factor 1 - y and is set to 0."""
    out = np.zeros_like(psi)
    lat = ctx.lattice()
    out[1:] = (psi[:-1] - psi[1:]) / ((1.0 - ctx.q2) * lat[:-1])
    return out


def poly_qdiff(coeffs, q):
    """Closed form of the radial difference quotient (psi(y)-psi(q^2 y))/((1-q^2) y)."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size <= 1:
        return np.zeros(1, dtype=complex)
    i = np.arange(1, c.size)
    return c[1:] * (1.0 - q ** (2.0 * i)) / (1.0 - q * q)


def dbar_polar(p: PolarFunction, ctx: QContext) -> PolarFunction:
    """Coefficient g of dbar f = g dz* for a polar function f.

    Sector action: mode m >= 0 maps to m+1 with g = -D psi; mode -p maps to
    -(p-1) with g = -q^(-2p) (D psi)(q^(-2) y)(1-y) + c_p psi.
    """
    q = ctx.q
    modes = {}
    polys = {} if p.exact else None
    one_minus_y = 1.0 - ctx.lattice()
    for m, psi in p.modes.items():
        if m >= 0:
            out_mode, arr = m + 1, -_qdiff(psi, ctx)
        else:
            pp = -m
            arr = -q ** (-2 * pp) * _qdiff_back(psi, ctx) * one_minus_y \
                + _cfac(q, pp) * psi
            out_mode = m + 1
        modes[out_mode] = modes.get(out_mode, 0.0) + arr
        if polys is not None:
            c = p.polys[m]
            if m >= 0:
                cc = -poly_qdiff(c, q)
            else:
                dq = poly_scale_arg(poly_qdiff(c, q), q, -1)
                cc = npoly.polyadd(
                    -q ** (-2 * pp) * npoly.polymul(dq, np.array([1.0, -1.0])),
                    _cfac(q, pp) * c,
                )
            polys[out_mode] = npoly.polyadd(polys[out_mode], cc) if out_mode in polys else cc
    if polys is not None:
        # the forward difference loses the last lattice level; closed forms
        # are exact everywhere, so resample from them
        lattice = ctx.lattice()
        modes = {m: npoly.polyval(lattice, c) for m, c in polys.items()}
    return PolarFunction(p.q, p.levels, modes, polys)


def del_polar(p: PolarFunction, ctx: QContext) -> PolarFunction:
    """Coefficient g of del f = dz g for a polar function f.

    Mode m >= 1 maps to m-1 with g = -q^(-2m)(D psi)(q^(-2) y)(1-y) + c_m psi;
    modes m <= 0 map to m-1 with g = -D psi.
    """
    q = ctx.q
    modes = {}
    polys = {} if p.exact else None
    one_minus_y = 1.0 - ctx.lattice()
    for m, psi in p.modes.items():
        if m >= 1:
            arr = -q ** (-2 * m) * _qdiff_back(psi, ctx) * one_minus_y \
                + _cfac(q, m) * psi
        else:
            arr = -_qdiff(psi, ctx)
        out_mode = m - 1
        modes[out_mode] = modes.get(out_mode, 0.0) + arr
        if polys is not None:
            c = p.polys[m]
            if m >= 1:
                dq = poly_scale_arg(poly_qdiff(c, q), q, -1)
                cc = npoly.polyadd(
                    -q ** (-2 * m) * npoly.polymul(dq, np.array([1.0, -1.0])),
                    _cfac(q, m) * c,
                )
            else:
                cc = -poly_qdiff(c, q)
            polys[out_mode] = npoly.polyadd(polys[out_mode], cc) if out_mode in polys else cc
    if polys is not None:
        lattice = ctx.lattice()
        modes = {m: npoly.polyval(lattice, c) for m, c in polys.items()}
    return PolarFunction(p.q, p.levels, modes, polys)


# -- twisted bimodule sections ---------------------------------------------

@dataclass
class TwistedSection:
    """f v_lambda (grade 0) or f v_lambda dz* (grade 1), weight lambda real.

    The generator relations z v = q^(-lambda) v z, z* v = q^lambda v z*,
    dz* v = q^lambda v dz* put v_lambda in the canonical middle position.
    """

    grade: int
    coeff: NormalPoly
    weight: float

    def __post_init__(self):
        if self.grade not in (0, 1):
            raise ValueError("grade must be 0 or 1")


def dbar_twisted(s: TwistedSection) -> TwistedSection:
    """Unique degree-1 differentiation with dbar v_lambda = 0."""
    if s.grade != 0:
        raise ValueError("dbar of a grade-1 twisted section is zero by degree")
    g = del_r_zs(s.coeff)
    return TwistedSection(1, (s.coeff.q ** s.weight) * g, s.weight)
