"""Kernels on the product of two quantum discs.

A kernel term is indexed by generator powers (a, b, c, d) and a radial part
psi(y, eta), standing for the element

    z*^a  zeta^c  psi(y, eta)  z^b  zeta*^d

of the tensor algebra whose first factor multiplies in the opposite order
(braces multiplication).  The first tensor slot of such a term, read as an
ordinary element, is z^b u(y) z*^a; the second is zeta^c v(eta) zeta*^d.
Radial parts are sums of separable pairs u(y) v(eta), which the product rules

    z^p1 f z*^s1 . z^p2 g z*^s2
        = z^(p1+p2-s1) f(q^(2t) y) (q^(2t+2) y; q^2)_s1 g(y) z*^s2     (p2 >= s1, t = p2-s1)
        = z^p1 f(y) (q^(2t+2) y; q^2)_p2 g(q^(2t) y) z*^(s1-p2+s2)    (p2 < s1,  t = s1-p2)

preserve.  Each radial factor is held either as polynomial coefficients in
the radial variable (exact under shifts and products) or as lattice samples
(for distributions); sample shifts move inward only and lose the top
lattice levels, which is the standard truncation.
"""

from __future__ import annotations

import warnings

import numpy as np
from numpy.polynomial import polynomial as npoly

from .context import QContext
from .errors import DegreeCapExceeded, DivergenceWarning
from .polar import PolarFunction, _shift
from .qspecial import qpoch_finite

_GRID_CACHE = {}


def _grids(q, levels, cap):
    """UP[m, i] = (q^(2m+2); q^2)_i and DW[n, i] = (q^(2n); q^(-2))_i."""
    key = (q, levels, cap)
    hit = _GRID_CACHE.get(key)
    if hit is not None:
        return hit
    rows = 2 * (levels + cap) + 2
    up = np.empty((rows, cap + 2))
    up[:, 0] = 1.0
    lat = q ** (2.0 * np.arange(rows) + 2.0)
    for i in range(cap + 1):
        up[:, i + 1] = up[:, i] * (1.0 - lat * q ** (2 * i))
    dw = np.empty((levels, cap + 2))
    dw[:, 0] = 1.0
    lat0 = q ** (2.0 * np.arange(levels))
    for i in range(cap + 1):
        dw[:, i + 1] = dw[:, i] * (1.0 - lat0 * q ** (-2 * i))
    _GRID_CACHE[key] = (up, dw)
    return up, dw


class Rad:
    """One radial factor: polynomial coefficients ('p') or lattice samples ('s')."""

    __slots__ = ("kind", "a")

    def __init__(self, kind, a):
        self.kind = kind
        self.a = np.asarray(a, dtype=complex)

    @classmethod
    def poly(cls, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        nz = np.nonzero(np.abs(c))[0]
        return cls("p", c[: nz[-1] + 1] if nz.size else c[:1])

    @classmethod
    def samples(cls, arr):
        return cls("s", arr)

    def eval(self, lattice):
        if self.kind == "p":
            return npoly.polyval(lattice, self.a)
        n = lattice.size
        out = np.zeros(n, dtype=complex)
        m = min(n, self.a.size)
        out[:m] = self.a[:m]
        return out

    def shift_scale(self, q, t):
        """psi(q^(2t) y); inward index shift on samples."""
        if t == 0:
            return self
        if self.kind == "p":
            return Rad("p", self.a * q ** (2.0 * t * np.arange(self.a.size)))
        return Rad("s", _shift(self.a, t))

    def scaled(self, c):
        return Rad(self.kind, c * self.a)

    def is_zero(self, tol=0.0):
        return not np.any(np.abs(self.a) > tol)


def _rad_mul(r1: Rad, r2: Rad, lattice) -> Rad:
    if r1.kind == "p" and r2.kind == "p":
        return Rad.poly(npoly.polymul(r1.a, r2.a))
    return Rad.samples(r1.eval(lattice) * r2.eval(lattice))


def _rad_add(r1: Rad, r2: Rad, lattice) -> Rad:
    if r1.kind == "p" and r2.kind == "p":
        return Rad.poly(npoly.polyadd(r1.a, r2.a))
    return Rad.samples(r1.eval(lattice) + r2.eval(lattice))


def _poch_up_poly(q, shift, count) -> Rad:
    """prod_{i<count} (1 - q^(2 shift + 2 + 2i) y) as polynomial coefficients."""
    out = np.array([1.0 + 0.0j])
    for i in range(count):
        out = npoly.polymul(out, np.array([1.0, -(q ** (2 * shift + 2 + 2 * i))]))
    return Rad("p", out)


def _proportional(r1: Rad, r2: Rad):
    """Return c with r2 = c r1, or None."""
    if r1.kind != r2.kind:
        return None
    a, b = r1.a, r2.a
    if a.size != b.size:
        if r1.kind == "s":
            return None
        n = max(a.size, b.size)
        a = np.pad(a, (0, n - a.size))
        b = np.pad(b, (0, n - b.size))
    i = int(np.argmax(np.abs(a)))
    if a[i] == 0:
        return None
    c = b[i] / a[i]
    if np.max(np.abs(b - c * a)) <= 1e-12 * max(np.max(np.abs(b)), 1e-300):
        return c
    return None


def _m_product(q, f: Rad, s1, p2, g: Rad, s2, p1):
    """(p, h, s) with z^p1 f z*^s1 . z^p2 g z*^s2 = z^p h z*^s."""
    if p2 >= s1:
        t = p2 - s1
        h = (f.shift_scale(q, t), _poch_up_poly(q, t, s1), g)
        return p1 + p2 - s1, h, s2
    t = s1 - p2
    h = (f, _poch_up_poly(q, t, p2), g.shift_scale(q, t))
    return p1, h, s1 - p2 + s2


def _resolve(parts, lattice):
    r = parts[0]
    for other in parts[1:]:
        r = _rad_mul(r, other, lattice)
    return r


class BiKernel:
    """Distribution kernel on the product disc, in separable-term form.

    terms: dict (a, b, c, d) -> list of (u, v) Rad pairs; the radial part of
    the term is sum_j u_j(y) v_j(eta).
    """

    __slots__ = ("q", "levels", "terms", "_stacks")

    def __init__(self, q, levels, terms):
        self.q = float(q)
        self.levels = int(levels)
        self.terms = terms
        self._stacks = None

    def lattice(self):
        return self.q ** (2.0 * np.arange(self.levels))

    def stacks(self):
        """Per-term (U, V) sample arrays of shape (pairs, levels), cached."""
        if self._stacks is None:
            lat = self.lattice()
            self._stacks = {
                key: (
                    np.array([u.eval(lat) for u, _ in pairs]),
                    np.array([v.eval(lat) for _, v in pairs]),
                )
                for key, pairs in self.terms.items()
                if pairs
            }
        return self._stacks

    def scaled(self, factor):
        return BiKernel(
            self.q,
            self.levels,
            {
                key: [(u.scaled(factor), v) for u, v in pairs]
                for key, pairs in self.terms.items()
            },
        )

    def plus(self, other):
        terms = {k: list(v) for k, v in self.terms.items()}
        for key, pairs in other.terms.items():
            terms.setdefault(key, []).extend(pairs)
        return BiKernel(self.q, self.levels, terms)

    def n_pairs(self):
        return sum(len(p) for p in self.terms.values())


def _add_pair(pairs, u: Rad, v: Rad, merge):
    if u.is_zero() or v.is_zero():
        return
    if merge and u.kind == "p" and v.kind == "p":
        for idx, (u0, v0) in enumerate(pairs):
            if u0.kind != "p" or v0.kind != "p":
                continue
            c = _proportional(v0, v)
            if c is not None:
                pairs[idx] = (Rad.poly(npoly.polyadd(u0.a, c * u.a)), v0)
                return
            c = _proportional(u0, u)
            if c is not None:
                pairs[idx] = (u0, Rad.poly(npoly.polyadd(v0.a, c * v.a)))
                return
    pairs.append((u, v))


def braces_multiply(k1: BiKernel, k2: BiKernel, ctx: QContext, merge=True, key_cap=None) -> BiKernel:
    """Product in the tensor algebra with opposite first factor.

    First slots compose in reversed element order, second slots in the given
    order.  Terms whose generator powers exceed ``key_cap`` are dropped (the
    lattice window cannot see them); powers beyond ctx.degree_cap raise.
    """
    if (k1.q, k1.levels) != (k2.q, k2.levels):
        raise ValueError("kernels from different contexts")
    q = k1.q
    lat = k1.lattice()
    hard_cap = ctx.degree_cap
    terms = {}
    for (a1, b1, c1, d1), pairs1 in k1.terms.items():
        for (a2, b2, c2, d2), pairs2 in k2.terms.items():
            # first slot: M(b2, u2, a2) . M(b1, u1, a1); second in given order
            if b1 >= a2:
                fa, fb = a1, b2 + b1 - a2
            else:
                fa, fb = a1 + a2 - b1, b2
            if c2 >= d1:
                sc, sd = c1 + c2 - d1, d2
            else:
                sc, sd = c1, d1 - c2 + d2
            if key_cap is not None and max(fa, fb, sc, sd) > key_cap:
                continue
            if max(fa, fb, sc, sd) > hard_cap:
                raise DegreeCapExceeded(
                    f"kernel powers ({fa},{fb},{sc},{sd}) exceed cap {hard_cap}"
                )
            key = (fa, fb, sc, sd)
            bucket = terms.setdefault(key, [])
            for u1, v1 in pairs1:
                for u2, v2 in pairs2:
                    _, uparts, _ = _m_product(q, u2, a2, b1, u1, a1, b2)
                    _, vparts, _ = _m_product(q, v1, d1, c2, v2, d2, c1)
                    _add_pair(bucket, _resolve(uparts, lat), _resolve(vparts, lat), merge)
    return BiKernel(q, k1.levels, {k: v for k, v in terms.items() if v})


def _ones():
    return Rad.poly([1.0])


def embed_second(f: PolarFunction, ctx: QContext) -> BiKernel:
    """1 (x) f as a kernel."""
    terms = {}
    for k, phi in f.modes.items():
        key = (0, 0, k, 0) if k >= 0 else (0, 0, 0, -k)
        rad = Rad.poly(f.polys[k]) if f.exact else Rad.samples(phi)
        terms.setdefault(key, []).append((_ones(), rad))
    return BiKernel(ctx.q, ctx.levels, terms)


def embed_first(f: PolarFunction, ctx: QContext) -> BiKernel:
    """f (x) 1 as a kernel (first slot multiplies oppositely)."""
    terms = {}
    for k, psi in f.modes.items():
        key = (0, k, 0, 0) if k >= 0 else (-k, 0, 0, 0)
        rad = Rad.poly(f.polys[k]) if f.exact else Rad.samples(psi)
        terms.setdefault(key, []).append((rad, _ones()))
    return BiKernel(ctx.q, ctx.levels, terms)


def geometric_kernel(kind, ctx: QContext, gamma=None, series_cap=None) -> BiKernel:
    """Expansions of the standard geometric kernels.

    kind:
      'inv_zstar_zeta'   (1 - z* zeta)^(-1)         terms z*^i zeta^i
      'inv_z_zetastar'   (1 - z zeta*)^(-1)         terms z^j zeta*^j
      'eta'              1 (x) (1 - zeta zeta*)
      'y_op'             (1 - z* z) (x) 1, the element q^2 y
      'green_factor_u'   (1 - zeta zeta*)(1 - z* zeta)^(-1)
      'green_factor_v'   (1 - z* z)(1 - z zeta*)^(-1)
      'bergman'          (1 - z zeta*)^(-1) (1 - q^2 z zeta*)^(-1)
      'cauchy'           (1 - z zeta*)^(-1) (1 - q^(-2) z zeta*)^(-1)
      'binom'            (z zeta*; q^2)_(-gamma), coefficients
                         (q^(2g); q^2)_n / (q^2; q^2)_n q^(-2gn)
    """
    q = ctx.q
    cap = ctx.levels - 1 if series_cap is None else series_cap
    if kind == "inv_zstar_zeta":
        terms = {(i, 0, i, 0): [(_ones(), _ones())] for i in range(cap + 1)}
        return BiKernel(q, ctx.levels, terms)
    if kind == "inv_z_zetastar":
        terms = {(0, j, 0, j): [(_ones(), _ones())] for j in range(cap + 1)}
        return BiKernel(q, ctx.levels, terms)
    if kind == "eta":
        return BiKernel(q, ctx.levels, {(0, 0, 0, 0): [(_ones(), Rad.poly([0.0, 1.0]))]})
    if kind == "y_op":
        return BiKernel(q, ctx.levels, {(0, 0, 0, 0): [(Rad.poly([0.0, q * q]), _ones())]})
    if kind == "green_factor_u":
        return braces_multiply(
            geometric_kernel("eta", ctx), geometric_kernel("inv_zstar_zeta", ctx, series_cap=cap), ctx
        )
    if kind == "green_factor_v":
        return braces_multiply(
            geometric_kernel("y_op", ctx), geometric_kernel("inv_z_zetastar", ctx, series_cap=cap), ctx
        )
    if kind in ("bergman", "cauchy"):
        t = q * q if kind == "bergman" else q ** (-2.0)
        first = geometric_kernel("inv_z_zetastar", ctx, series_cap=cap)
        second = BiKernel(
            q,
            ctx.levels,
            {(0, j, 0, j): [(Rad.poly([t**j]), _ones())] for j in range(cap + 1)},
        )
        return braces_multiply(first, second, ctx)
    if kind == "binom":
        if gamma is None:
            raise ValueError("'binom' requires gamma")
        terms = {}
        coef = 1.0 + 0.0j
        q2g = q ** (2.0 * complex(gamma))
        for n in range(cap + 1):
            terms[(0, n, 0, n)] = [(Rad.poly([coef * q2g ** (-n)]), _ones())]
            coef *= (1.0 - q2g * q ** (2 * n)) / (1.0 - q ** (2 * n + 2))
        return BiKernel(q, ctx.levels, terms)
    raise ValueError(f"unknown kernel kind {kind!r}")


def green_kernel(ctx: QContext, m_terms=None) -> BiKernel:
    """Green-function kernel: -sum_m (q^(-2)-1)/(q^(-2m)-1) {U^m V^m} with
    U = (1-zeta zeta*)(1-z* zeta)^(-1) and V = (1-z*z)(1-z zeta*)^(-1).

    The series coefficient decays like q^(2m); the default term count keeps
    the tail far below solver tolerances.  Terms invisible to the lattice
    window (powers beyond levels-1 + mode_cutoff) are dropped.
    """
    m_terms = ctx.green_terms if m_terms is None else m_terms
    if m_terms < 1:
        raise ValueError("need at least one series term")
    q = ctx.q
    key_cap = ctx.levels - 1 + ctx.mode_cutoff
    u1 = geometric_kernel("green_factor_u", ctx)
    v1 = geometric_kernel("green_factor_v", ctx)
    upow, vpow = u1, v1
    total = None
    for m in range(1, m_terms + 1):
        if m > 1:
            upow = braces_multiply(upow, u1, ctx, key_cap=key_cap)
            vpow = braces_multiply(vpow, v1, ctx, key_cap=key_cap)
        gm = braces_multiply(upow, vpow, ctx, key_cap=key_cap)
        coef = -(q ** (-2.0) - 1.0) / (q ** (-2.0 * m) - 1.0)
        gm = gm.scaled(coef)
        total = gm if total is None else total.plus(gm)
    return total


def first_factor_dz(k: BiKernel, ctx: QContext) -> BiKernel:
    """Left z-derivative applied to the first tensor slot of every term.

    M(b, u, a) maps to M(b-1, c_b u, a) + M(b, -q^(-2b) Du, a+1) with
    (Du)(y) = (u(y) - u(q^2 y)) / ((1-q^2) y).
    """
    from .forms import poly_qdiff

    q = ctx.q
    lat = ctx.lattice()
    terms = {}
    for (a, b, c, d), pairs in k.terms.items():
        for u, v in pairs:
            if b >= 1:
                cb = sum(q ** (-2 * i) for i in range(b))
                terms.setdefault((a, b - 1, c, d), []).append((u.scaled(cb), v))
            if u.kind == "p":
                du = Rad.poly(poly_qdiff(u.a, q))
            else:
                du = Rad.samples((u.a - _shift(u.a, 1)) / ((1.0 - ctx.q2) * lat))
            if not du.is_zero():
                terms.setdefault((a + 1, b, c, d), []).append(
                    (du.scaled(-(q ** (-2 * b))), v)
                )
    return BiKernel(q, ctx.levels, terms)


def kernel_apply(k: BiKernel, f: PolarFunction, measure, ctx: QContext) -> PolarFunction:
    """Integral operator: (id (x) integral)(K (1 (x) f)).

    measure 'mu' weights the second-slot mode-0 part with q^(2n), 'nu' with
    q^(-2n).  The output polar mode of a term (a, b, c, d) is b - a.
    """
    if (k.q, k.levels) != (f.q, f.levels):
        raise ValueError("kernel and function from different contexts")
    q = ctx.q
    n = ctx.levels
    cap = max(ctx.degree_cap, ctx.levels + ctx.mode_cutoff)
    up, dw = _grids(q, n, cap)
    sign = {"mu": 1.0, "nu": -1.0}[measure]
    base_w = (1.0 - ctx.q2) * q ** (sign * 2.0 * np.arange(n))
    modes = {}
    tail_flag = False
    for (a, b, c, d), (ustack, vstack) in k.stacks().items():
        for kmode, phi in f.modes.items():
            p2, s2 = (kmode, 0) if kmode >= 0 else (0, -kmode)
            # second slot product M(c, v, d) . M(p2, phi, s2)
            if p2 >= d:
                p, s = c + p2 - d, s2
                t = p2 - d
                chi = _shift_rows(vstack, t) * up[t : t + n, d] * phi
            else:
                p, s = c, d - p2 + s2
                t = d - p2
                chi = vstack * up[t : t + n, p2] * _shift(np.asarray(phi), t)
            if p != s or p >= n:
                continue
            # integral of the mode-0 part of M(p, chi, p): the sample at
            # level m is chi[m-p] (q^(2m); q^(-2))_p, so reindex j = m - p
            wvec = np.zeros(n, dtype=complex)
            wvec[: n - p] = base_w[p:] * dw[p:, p]
            ivec = chi @ wvec
            if measure == "nu":
                lo = max(0, n - p - 3)
                tail = np.max(np.abs(chi[:, lo : n - p] * wvec[lo : n - p]))
                if tail > 1e-9 * max(1.0, float(np.max(np.abs(ivec)))):
                    tail_flag = True
            # first slot to polar: mode b-a, samples u[r-mn] (q^(2r); q^(-2))_mn
            mn = min(a, b)
            col = _shift_rows(ustack, -mn) * dw[:, mn]
            out = col.T @ ivec
            key = b - a
            if key in modes:
                modes[key] = modes[key] + out
            else:
                modes[key] = out
    if tail_flag:
        warnings.warn(
            "kernel application: invariant-measure sums not decaying within truncation",
            DivergenceWarning,
            stacklevel=2,
        )
    return PolarFunction(k.q, k.levels, modes)


def _shift_rows(arr, t):
    """Row-wise lattice shift: out[..., n] = arr[..., n+t], out of range -> 0."""
    if t == 0:
        return arr
    n = arr.shape[-1]
    out = np.zeros_like(arr)
    if t > 0:
        if t < n:
            out[..., : n - t] = arr[..., t:]
    else:
        if -t < n:
            out[..., -t:] = arr[..., : n + t]
    return out


def kernel_to_tensor(k: BiKernel, ctx: QContext):
    """Canonical double polar decomposition: dict (mode_y, mode_eta) -> matrix.

    The entry at (r, s) is the radial sample of the given angular bimode at
    (y, eta) = (q^(2r), q^(2s)); used to compare kernels built differently.
    """
    cap = max(ctx.degree_cap, ctx.levels + ctx.mode_cutoff)
    _, dw = _grids(ctx.q, ctx.levels, cap)
    out = {}
    for (a, b, c, d), (ustack, vstack) in k.stacks().items():
        m1, m2 = b - a, c - d
        mn1, mn2 = min(a, b), min(c, d)
        cols = _shift_rows(ustack, -mn1) * dw[:, mn1]
        rows = _shift_rows(vstack, -mn2) * dw[:, mn2]
        block = cols.T @ rows
        key = (m1, m2)
        out[key] = out.get(key, 0.0) + block
    return out
