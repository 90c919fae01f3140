"""Integration: Lebesgue, invariant, weighted; boundary calculus; Stokes."""

import warnings

import numpy as np
import pytest

from qdisc.errors import DivergenceWarning
from qdisc.forms import DiffForm
from qdisc.ncpoly import NormalPoly, random_poly
from qdisc.parser import parse_expr
from qdisc.polar import PolarFunction, polar_multiply, to_polar
from qdisc.quad import (
    boundary_integral_10,
    boundary_restrict,
    form_integral_11,
    mu,
    nu,
    nu_alpha,
    nu_alpha_trace,
    stokes_residual,
    stokes_residual_polar,
    weighted_inner,
)

Q = 0.5


class TestMu:
    def test_unit(self, ctx):
        assert mu(PolarFunction.one(ctx)) == pytest.approx(1.0, abs=1e-14)

    def test_no_mode_zero(self, ctx, rng):
        f = PolarFunction.from_samples(ctx, 1, rng.standard_normal(ctx.levels))
        assert mu(f) == 0.0

    def test_monomial_value(self, ctx):
        # mu(z*^n z^n) = (1-q^2)/(1-q^(2n+2))
        n = 2
        f = to_polar(NormalPoly.zstar(Q) ** n * NormalPoly.z(Q) ** n, ctx)
        assert mu(f) == pytest.approx((1 - Q**2) / (1 - Q ** (2 * n + 2)), rel=1e-13)

    def test_positive_on_squares(self, ctx, rng):
        for _ in range(10):
            f = to_polar(random_poly(rng, Q, 3), ctx)
            val = mu(polar_multiply(f.star(), f, ctx))
            assert val.real >= -1e-14
            assert abs(val.imag) < 1e-13 * max(1.0, val.real)


class TestNu:
    def test_indicator(self, ctx):
        f = PolarFunction.delta(ctx, 0, 0)
        assert nu(f) == pytest.approx(1 - Q * Q, rel=1e-15)

    def test_y_squared(self, ctx):
        f = to_polar(NormalPoly.y(Q) ** 2, ctx)
        assert nu(f) == pytest.approx(1.0, rel=1e-12)

    def test_matches_weighted_mu(self, ctx, rng):
        # nu(f) = mu(f (1-zz*)^(-2)) on finite f
        for _ in range(5):
            level = int(rng.integers(0, 6))
            f = PolarFunction.delta(ctx, 0, level, complex(rng.standard_normal()))
            weight = PolarFunction.from_samples(ctx, 0, ctx.lattice() ** (-2.0))
            assert nu(f) == pytest.approx(mu(polar_multiply(f, weight, ctx)), rel=1e-13)

    def test_divergence_warning(self, ctx):
        with pytest.warns(DivergenceWarning):
            nu(PolarFunction.one(ctx))


class TestNuAlpha:
    def test_unit(self, ctx):
        assert nu_alpha(PolarFunction.one(ctx), 0.8) == pytest.approx(1.0, abs=1e-13)

    def test_routes_agree(self, ctx, rng):
        for _ in range(8):
            mode = int(rng.integers(-2, 3))
            decay = np.exp(-1.0 * np.arange(ctx.levels))
            f = PolarFunction.from_samples(
                ctx, mode, rng.standard_normal(ctx.levels) * decay
            )
            alpha = float(rng.uniform(0.3, 2.5))
            assert nu_alpha(f, alpha) == pytest.approx(
                nu_alpha_trace(f, alpha, ctx), rel=1e-12, abs=1e-13
            )


class TestWeightedInner:
    def test_lambda_two_is_mu(self, ctx, rng):
        f = to_polar(random_poly(rng, Q, 3), ctx)
        g = to_polar(random_poly(rng, Q, 3), ctx)
        got = weighted_inner(f, g, 2.0, grade=0, ctx=ctx)
        want = mu(polar_multiply(g.star(), f, ctx))
        assert got == pytest.approx(want, rel=1e-12)

    def test_conjugate_symmetry(self, ctx, rng):
        decay = np.exp(-np.arange(ctx.levels))
        f = PolarFunction.from_samples(ctx, 1, (rng.standard_normal(ctx.levels) + 1j * rng.standard_normal(ctx.levels)) * decay)
        g = PolarFunction.from_samples(ctx, 1, (rng.standard_normal(ctx.levels) + 1j * rng.standard_normal(ctx.levels)) * decay)
        a = weighted_inner(f, g, 1.3, grade=1, ctx=ctx)
        b = weighted_inner(g, f, 1.3, grade=1, ctx=ctx)
        assert a == pytest.approx(np.conj(b), rel=1e-12)

    def test_lambda_zero_is_nu(self, ctx, rng):
        decay = np.exp(-2.0 * np.arange(ctx.levels))
        f = PolarFunction.from_samples(ctx, 0, rng.standard_normal(ctx.levels) * decay)
        g = PolarFunction.from_samples(ctx, 0, rng.standard_normal(ctx.levels) * decay)
        got = weighted_inner(f, g, 0.0, grade=0, ctx=ctx)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            want = nu(polar_multiply(g.star(), f, ctx))
        assert got == pytest.approx(want, rel=1e-11)


class TestFormIntegral:
    def test_volume_unit(self, ctx):
        w = DiffForm.volume(NormalPoly.unit(Q))
        assert form_integral_11(w, ctx) == pytest.approx(-2j * np.pi, rel=1e-13)

    def test_volume_y(self, ctx):
        w = DiffForm.volume(NormalPoly.y(Q))
        want = -2j * np.pi * (1 - Q**2) / (1 - Q**4)
        assert form_integral_11(w, ctx) == pytest.approx(want, rel=1e-12)

    def test_placement_invariance(self, ctx, rng):
        # int dz dz* f = int dz f dz* = int f dz dz*: commuting f through
        # dz, dz* only rescales modes that mu kills
        from qdisc.forms import _scale_sigma

        for _ in range(8):
            f = random_poly(rng, Q, 4)
            mid = form_integral_11(DiffForm.volume(f), ctx)
            left = form_integral_11(DiffForm.volume(_scale_sigma(f, 1)), ctx)
            right = form_integral_11(DiffForm.volume(_scale_sigma(f, -1)), ctx)
            assert mid == pytest.approx(left, rel=1e-12, abs=1e-12)
            assert mid == pytest.approx(right, rel=1e-12, abs=1e-12)


class TestBoundary:
    def test_ideal_generator_dies(self):
        r = boundary_restrict(NormalPoly.y(Q))
        assert r.max_abs() < 1e-15

    def test_z_restricts_to_phase(self):
        r = boundary_restrict(NormalPoly.z(Q))
        assert r.coeff(1) == 1.0 and len(r.laurent) == 1

    def test_multiplicative(self, rng):
        for _ in range(10):
            f = random_poly(rng, Q, 3)
            g = random_poly(rng, Q, 3)
            lhs = boundary_restrict(f * g)
            rhs = boundary_restrict(f) * boundary_restrict(g)
            assert lhs.max_abs_diff(rhs) < 1e-12

    def test_boundary_integral_examples(self):
        psi = DiffForm.dz(NormalPoly.zstar(Q))
        assert boundary_integral_10(psi) == pytest.approx(2j * np.pi, rel=1e-14)
        psi2 = DiffForm.dz(NormalPoly.z(Q))
        assert boundary_integral_10(psi2) == 0.0


class TestStokes:
    def test_special_case_dz_zstar(self, ctx):
        psi = DiffForm.dz(NormalPoly.zstar(Q))
        assert stokes_residual(psi, ctx) < 1e-12
        assert boundary_integral_10(psi) == pytest.approx(2j * np.pi, rel=1e-13)

    def test_polynomial_forms(self, ctx, rng):
        for _ in range(20):
            psi = DiffForm.dz(random_poly(rng, Q, 6))
            assert stokes_residual(psi, ctx) < 1e-12

    def test_vanishing_boundary_radial(self, ctx):
        # psi = dz p(y) z* with p(0) = 0: both sides vanish
        p = parse_expr("y^2 - y^3", Q)
        psi = DiffForm.dz(p * NormalPoly.zstar(Q))
        assert abs(boundary_integral_10(psi)) < 1e-14
        assert stokes_residual(psi, ctx) < 1e-13

    def test_finite_coefficients(self, ctx, rng):
        # finite lattice-supported coefficients: both sides are zero
        for _ in range(10):
            mode = int(rng.integers(-3, 4))
            level = int(rng.integers(0, 8))
            f = PolarFunction.delta(ctx, mode, level, complex(rng.standard_normal()))
            assert stokes_residual_polar(f, ctx) < 1e-12
