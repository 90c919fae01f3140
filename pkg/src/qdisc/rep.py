"""Operator realization on the span of {z^m v0} with z* v0 = 0.

The generator action is z: e_n -> e_(n+1) and z*: e_n -> (1-q^(2n)) e_(n-1),
with scalar product (z^j v0, z^m v0) = delta_jm (q^2; q^2)_m.  The radial
element y = 1 - z z* is diagonal with eigenvalue q^(2n), which identifies the
lattice used by the polar decomposition with the spectrum of y.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .context import QContext, down_poch_grid
from .ncpoly import NormalPoly
from .polar import PolarFunction, from_polar
from .qspecial import qpoch_finite


def shift_matrix(n):
    """e_m -> e_(m+1) truncated to n x n."""
    return np.diag(np.ones(n - 1), -1).astype(complex)


def lowering_matrix(ctx: QContext, n=None):
    """Matrix of z*: e_m -> (1 - q^(2m)) e_(m-1)."""
    n = ctx.levels if n is None else n
    w = 1.0 - ctx.q ** (2.0 * np.arange(1, n))
    return np.diag(w, 1).astype(complex)


def t_matrix(f: NormalPoly, ctx: QContext, n=None):
    """Truncated matrix of T(f); column index is the input basis vector."""
    n = ctx.levels if n is None else n
    tz = shift_matrix(n)
    tzs = lowering_matrix(ctx, n)
    max_j = max((j for j, _ in f.coeffs), default=0)
    max_k = max((k for _, k in f.coeffs), default=0)
    zpow = [np.eye(n, dtype=complex)]
    for _ in range(max_j):
        zpow.append(zpow[-1] @ tz)
    spow = [np.eye(n, dtype=complex)]
    for _ in range(max_k):
        spow.append(spow[-1] @ tzs)
    out = np.zeros((n, n), dtype=complex)
    for (j, k), c in f.coeffs.items():
        out += c * (zpow[j] @ spow[k])
    return out


def fock_inner(j, m, ctx: QContext):
    """(z^j v0, z^m v0) = delta_jm (q^2; q^2)_m."""
    if j != m:
        return 0.0 + 0.0j
    return qpoch_finite(ctx.q2, ctx.q2, m)


def fock_gram(ctx: QContext, n=None):
    n = ctx.levels if n is None else n
    out = np.empty(n)
    out[0] = 1.0
    for m in range(1, n):
        out[m] = out[m - 1] * (1.0 - ctx.q ** (2 * m))
    return out


def polar_to_matrix(p: PolarFunction, ctx: QContext, n=None):
    """Matrix of T(f) from polar samples; mode m occupies diagonal -m."""
    n = ctx.levels if n is None else n
    out = np.zeros((n, n), dtype=complex)
    poch = down_poch_grid(ctx, max((abs(m) for m in p.modes), default=0), length=n)
    for m, psi in p.modes.items():
        if m >= 0:
            # column c, row c+m: psi(q^(2c))
            for c in range(0, n - m):
                out[c + m, c] = psi[c] if c < psi.size else 0.0
        else:
            pmode = -m
            # column c >= pmode, row c-pmode: (q^(2c); q^(-2))_p psi(q^(2(c-p)))
            for c in range(pmode, n):
                val = psi[c - pmode] if c - pmode < psi.size else 0.0
                out[c - pmode, c] = poch[c, pmode] * val
    return out


def matrix_to_polar(mat, ctx: QContext):
    """Invert :func:`polar_to_matrix` on the truncated space."""
    n = mat.shape[0]
    if n > ctx.levels:
        raise ValueError("matrix larger than the context lattice")
    modes = {}
    poch = down_poch_grid(ctx, min(n, ctx.mode_cutoff), length=n)
    for m in range(-min(n - 1, ctx.mode_cutoff), min(n - 1, ctx.mode_cutoff) + 1):
        arr = np.zeros(ctx.levels, dtype=complex)
        if m >= 0:
            for c in range(0, n - m):
                arr[c] = mat[c + m, c]
        else:
            pmode = -m
            for c in range(pmode, n):
                arr[c - pmode] = mat[c - pmode, c] / poch[c, pmode]
        modes[m] = arr
    return PolarFunction(ctx.q, ctx.levels, modes)


def trace_pairing(f: PolarFunction, g: PolarFunction, ctx: QContext):
    """Nondegenerate pairing tr T(f) T(g) of finite polar functions."""
    a = polar_to_matrix(f, ctx)
    b = polar_to_matrix(g, ctx)
    return np.trace(a @ b)


def samples_to_poly(samples, ctx: QContext, degree):
    """Interpolating polynomial of given degree through the first lattice points."""
    nodes = ctx.lattice()[: degree + 1]
    vals = np.asarray(samples, dtype=complex)[: degree + 1]
    vm = np.vander(nodes, degree + 1, increasing=True).astype(complex)
    return np.linalg.solve(vm, vals)


def polar_to_normal(p: PolarFunction, ctx: QContext, degree):
    """Reconstruct the normal-ordered polynomial from lattice samples.

    Assumes every radial part is polynomial of at most the given degree;
    the closed forms are recovered by interpolation on the lattice.
    """
    polys = {m: samples_to_poly(arr, ctx, degree) for m, arr in p.modes.items()}
    lattice = ctx.lattice()
    modes = {m: npoly.polyval(lattice, c) for m, c in polys.items()}
    exactified = PolarFunction(ctx.q, ctx.levels, modes, polys)
    return from_polar(exactified, ctx)


# -- Bargmann-type quantization --------------------------------------------

@dataclass
class BargmannOps:
    """Shifted generator pair on the weighted holomorphic space.

    zhat is the raising shift z^m -> z^(m+1); zhat_star lowers with weights
    (1 - q^(2m)) / (1 - q^(4 alpha + 2m)).
    """

    alpha: float
    zhat: np.ndarray
    zhat_star: np.ndarray


def bargmann_norm(alpha, m, q):
    """Norm of z^m: ((q^2; q^2)_m / (q^(4 alpha + 2); q^2)_m)^(1/2)."""
    num = qpoch_finite(q * q, q * q, m)
    den = qpoch_finite(q ** (4.0 * alpha + 2.0), q * q, m)
    return np.sqrt((num / den).real)


def bargmann_ops(alpha, ctx: QContext, n=None) -> BargmannOps:
    n = ctx.levels if n is None else n
    zhat = shift_matrix(n)
    m = np.arange(1, n)
    w = (1.0 - ctx.q ** (2.0 * m)) / (1.0 - ctx.q ** (4.0 * alpha + 2.0 * m))
    return BargmannOps(alpha, zhat, np.diag(w, 1).astype(complex))


def bargmann_relation_residual(ops: BargmannOps, q):
    """Residual of the deformed commutation relation

    zhat* zhat = q^2 zhat zhat* + (1-q^2)
                 + q^(4a) (1-q^2)/(1-q^(4a)) (1 - zhat zhat*)(1 - zhat* zhat)

    in sup norm over the principal block (last row/column excluded)."""
    a = ops.alpha
    n = ops.zhat.shape[0]
    eye = np.eye(n, dtype=complex)
    zz = ops.zhat_star @ ops.zhat
    zzs = ops.zhat @ ops.zhat_star
    q4a = q ** (4.0 * a)
    rhs = q * q * zzs + (1 - q * q) * eye \
        + q4a * (1 - q * q) / (1 - q4a) * ((eye - zzs) @ (eye - zz))
    res = zz - rhs
    return float(np.max(np.abs(res[: n - 1, : n - 1])))


def quantize(f: NormalPoly, alpha, ctx: QContext, n=None):
    """Berezin quantization: substitute the Bargmann pair into the normal form."""
    n = ctx.levels if n is None else n
    ops = bargmann_ops(alpha, ctx, n)
    max_j = max((j for j, _ in f.coeffs), default=0)
    max_k = max((k for _, k in f.coeffs), default=0)
    zpow = [np.eye(n, dtype=complex)]
    for _ in range(max_j):
        zpow.append(zpow[-1] @ ops.zhat)
    spow = [np.eye(n, dtype=complex)]
    for _ in range(max_k):
        spow.append(spow[-1] @ ops.zhat_star)
    out = np.zeros((n, n), dtype=complex)
    for (j, k), c in f.coeffs.items():
        out += c * (zpow[j] @ spow[k])
    return out
