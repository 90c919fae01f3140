"""Integrals on the quantum disc and its boundary.

The Lebesgue integral is the mode-0 Jackson sum
mu(f) = (1-q^2) sum_n psi_0(q^(2n)) q^(2n); the invariant integral nu uses
weight q^(-2n) and therefore requires decaying integrands.  The boundary
circle carries the quotient by the ideal generated by 1 - z z*, where each
monomial z^j z*^k restricts to e^(i(j-k)theta).
"""

from __future__ import annotations

import warnings

import numpy as np

from .context import QContext
from .errors import DivergenceWarning, SummabilityError
from .forms import DiffForm, dbar_form
from .ncpoly import BoundaryPoly, NormalPoly
from .polar import PolarFunction, polar_multiply, to_polar
from .rep import polar_to_matrix


def _mode0(p: PolarFunction):
    return p.mode(0)


def mu(p: PolarFunction) -> complex:
    """Normalized Lebesgue integral; only mode 0 contributes."""
    psi0 = _mode0(p)
    lat = p.q ** (2.0 * np.arange(p.levels))
    return (1.0 - p.q * p.q) * complex(np.sum(psi0 * lat))


def nu(p: PolarFunction) -> complex:
    """Invariant integral (1-q^2) sum psi_0(q^(2n)) q^(-2n).

    Emits DivergenceWarning when the partial sums are not Cauchy within the
    truncation (e.g. nu(1) diverges).
    """
    psi0 = _mode0(p)
    lat = p.q ** (-2.0 * np.arange(p.levels))
    terms = psi0 * lat
    total = complex(np.sum(terms))
    tail = np.max(np.abs(terms[-4:])) if p.levels >= 4 else np.max(np.abs(terms))
    if tail > 1e-10 * max(1.0, abs(total)):
        warnings.warn(
            "invariant integral: partial sums not Cauchy within truncation",
            DivergenceWarning,
            stacklevel=2,
        )
    return (1.0 - p.q * p.q) * total


def nu_alpha(p: PolarFunction, alpha) -> complex:
    """Weighted integral (1-q^(4a)) sum_n psi_0(q^(2n)) q^(4 a n)."""
    psi0 = _mode0(p)
    w = p.q ** (4.0 * alpha * np.arange(p.levels))
    return (1.0 - p.q ** (4.0 * alpha)) * complex(np.sum(psi0 * w))


def nu_alpha_trace(p: PolarFunction, alpha, ctx: QContext) -> complex:
    """Trace form (1-q^(4a)) tr T(f (1-z z*)^(2a)) of the same functional."""
    weight = PolarFunction.from_samples(
        ctx, 0, ctx.lattice() ** (2.0 * alpha)
    )
    mat = polar_to_matrix(polar_multiply(p, weight, ctx), ctx)
    return (1.0 - ctx.q ** (4.0 * alpha)) * complex(np.trace(mat))


def weighted_inner(f1: PolarFunction, f2: PolarFunction, lam, grade, ctx: QContext):
    """Twisted-bimodule scalar products.

    grade 0: int f2* f1 (1-zz*)^(lam-2) dmu;  grade 1: weight (1-zz*)^lam.
    Conjugate-symmetric and sesquilinear by construction.
    """
    if grade not in (0, 1):
        raise ValueError("grade must be 0 or 1")
    expo = lam - 2.0 if grade == 0 else float(lam)
    prod = polar_multiply(f2.star(), f1, ctx)
    psi0 = _mode0(prod)
    n = np.arange(ctx.levels)
    terms = psi0 * ctx.q ** (2.0 * n * (expo + 1.0))
    total = complex(np.sum(terms))
    tail = np.max(np.abs(terms[-4:]))
    if tail > 1e-10 * max(1.0, abs(total)):
        warnings.warn(
            "weighted inner product: integrand not decaying within truncation",
            DivergenceWarning,
            stacklevel=2,
        )
    return (1.0 - ctx.q2) * total


def form_integral_11(w: DiffForm, ctx: QContext) -> complex:
    """Integral of a (1,1)-form: int dz f dz* = -2 i pi mu(f)."""
    f11 = to_polar(w.f11, ctx)
    psi0 = np.abs(_mode0(f11))
    lat = ctx.lattice()
    if np.sum(psi0 * lat) > 1e12:
        raise SummabilityError("mode-0 samples not summable against q^(2n)")
    return -2j * np.pi * mu(f11)


def form_integral_11_polar(f11: PolarFunction) -> complex:
    """Same integral with the coefficient already in polar form."""
    psi0 = np.abs(_mode0(f11))
    lat = f11.q ** (2.0 * np.arange(f11.levels))
    if np.sum(psi0 * lat) > 1e12:
        raise SummabilityError("mode-0 samples not summable against q^(2n)")
    return -2j * np.pi * mu(f11)


def boundary_restrict(f: NormalPoly) -> BoundaryPoly:
    """Quotient by the ideal (1 - z z*): z^j z*^k -> e^(i (j-k) theta)."""
    out = {}
    for (j, k), c in f.coeffs.items():
        m = j - k
        out[m] = out.get(m, 0.0) + c
    return BoundaryPoly(out)


def boundary_integral_10(psi: DiffForm) -> complex:
    """Integral over the boundary of dz f: 2 pi i times the mean of (z f)|dU."""
    zf = NormalPoly.z(psi.q) * psi.f10
    return 2j * np.pi * boundary_restrict(zf).coeff(0)


def stokes_residual(psi: DiffForm, ctx: QContext) -> float:
    """|int dbar psi - int_dU psi| for a (1,0)-form psi = dz f."""
    lhs = form_integral_11(dbar_form(psi), ctx)
    rhs = boundary_integral_10(psi)
    return abs(lhs - rhs)


def stokes_residual_polar(f10: PolarFunction, ctx: QContext) -> float:
    """Stokes residual for dz f with a finite polar coefficient f.

    Finite functions restrict to zero on the boundary, so the boundary side
    is zero unless closed polynomial forms are available.
    """
    from .forms import dbar_polar

    g = dbar_polar(f10, ctx)
    lhs = -form_integral_11_polar(g)
    if f10.exact:
        rhs = 0.0 + 0.0j
        c = f10.polys.get(-1)
        if c is not None and c.size:
            rhs = 2j * np.pi * c[0]
    else:
        rhs = 0.0 + 0.0j
    return abs(lhs - rhs)
