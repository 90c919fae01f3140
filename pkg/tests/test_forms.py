"""Differential calculus: relations, Leibniz, bidegree split, twisted sections."""

import numpy as np
import pytest

from qdisc.forms import (
    DiffForm,
    TwistedSection,
    dbar_form,
    dbar_polar,
    dbar_twisted,
    del_form,
    del_l_z,
    del_polar,
    del_r_zs,
    exterior_d,
    form_multiply,
    partial_derivatives,
)
from qdisc.ncpoly import NormalPoly, involution, random_poly
from qdisc.polar import to_polar

Q = 0.5


def d_total(w):
    return exterior_d(w)[0]


class TestFormAlgebra:
    def test_dz_dz_is_zero(self):
        dz1 = DiffForm.dz(NormalPoly.unit(Q))
        assert form_multiply(dz1, dz1).is_zero()

    def test_dz_times_z(self):
        # dz z = q^2 z dz, both sides reduced to the dz-leftmost shape
        dz1 = DiffForm.dz(NormalPoly.unit(Q))
        zf = DiffForm.scalar(NormalPoly.z(Q))
        got = form_multiply(dz1, zf)
        want = Q * Q * form_multiply(zf, dz1)
        assert got.max_abs_diff(want) < 1e-15
        assert got.f10.max_abs_diff(NormalPoly.z(Q)) < 1e-15

    def test_dzs_times_zs(self):
        # dz* z* = q^(-2) z* dz*
        dzs1 = DiffForm.dzs(NormalPoly.unit(Q))
        got = form_multiply(DiffForm.dzs(NormalPoly.unit(Q)), DiffForm.scalar(NormalPoly.zstar(Q)))
        want = DiffForm.dzs(Q ** (-2) * NormalPoly.zstar(Q))
        assert got.max_abs_diff(want) < 1e-15

    def test_associativity(self, rng):
        for _ in range(15):
            comps = [
                DiffForm(
                    random_poly(rng, Q, 2),
                    random_poly(rng, Q, 2),
                    random_poly(rng, Q, 2),
                    random_poly(rng, Q, 2),
                )
                for _ in range(3)
            ]
            a, b, c = comps
            lhs = form_multiply(form_multiply(a, b), c)
            rhs = form_multiply(a, form_multiply(b, c))
            assert lhs.max_abs_diff(rhs) < 1e-10

    def test_dz_commutes_with_y(self):
        dz1 = DiffForm.dz(NormalPoly.unit(Q))
        yf = DiffForm.scalar(NormalPoly.y(Q))
        got = form_multiply(dz1, yf) - form_multiply(yf, dz1)
        assert got.is_zero(tol=1e-15)


class TestExteriorDerivative:
    def test_d_of_z(self):
        total, hol, anti = exterior_d(DiffForm.scalar(NormalPoly.z(Q)))
        assert total.f10.max_abs_diff(NormalPoly.unit(Q)) == 0.0
        assert anti.is_zero()

    def test_d_of_dz(self):
        total, _, _ = exterior_d(DiffForm.dz(NormalPoly.unit(Q)))
        assert total.is_zero()

    def test_d_squared_zero(self, rng):
        for _ in range(20):
            w = DiffForm(
                random_poly(rng, Q, 4),
                random_poly(rng, Q, 3),
                random_poly(rng, Q, 3),
                random_poly(rng, Q, 2),
            )
            assert d_total(d_total(w)).is_zero(tol=1e-12)

    def test_split_identities(self, rng):
        for _ in range(10):
            w = DiffForm.scalar(random_poly(rng, Q, 4))
            assert del_form(del_form(w)).is_zero(tol=1e-12)
            assert dbar_form(dbar_form(w)).is_zero(tol=1e-12)
            mixed = del_form(dbar_form(w)) + dbar_form(del_form(w))
            assert mixed.is_zero(tol=1e-12)

    def test_graded_leibniz(self, rng):
        for _ in range(10):
            a = DiffForm.scalar(random_poly(rng, Q, 3))
            b = DiffForm.dz(random_poly(rng, Q, 3))
            lhs = d_total(form_multiply(a, b))
            rhs = form_multiply(d_total(a), b) + form_multiply(a, d_total(b))
            assert lhs.max_abs_diff(rhs) < 1e-11
            lhs2 = d_total(form_multiply(b, a))
            rhs2 = form_multiply(d_total(b), a) - form_multiply(b, d_total(a))
            assert lhs2.max_abs_diff(rhs2) < 1e-11

    def test_involution_swaps_del_dbar(self, rng):
        for _ in range(10):
            f = DiffForm.scalar(random_poly(rng, Q, 4))
            lhs = del_form(f).star()
            rhs = dbar_form(f.star())
            assert lhs.max_abs_diff(rhs) < 1e-12


class TestPartials:
    def test_z_partials(self):
        d = partial_derivatives(NormalPoly.z(Q))
        assert d["lz"].max_abs_diff(NormalPoly.unit(Q)) == 0.0
        assert d["lzs"].max_abs_diff(NormalPoly.zero(Q)) == 0.0

    def test_left_right_consistency(self, rng):
        # dz (del_l f) = (del_r f) dz as forms
        for _ in range(10):
            f = random_poly(rng, Q, 4)
            d = partial_derivatives(f)
            lhs = form_multiply(DiffForm.dz(NormalPoly.unit(Q)), DiffForm.scalar(d["lz"]))
            rhs = form_multiply(DiffForm.scalar(d["rz"]), DiffForm.dz(NormalPoly.unit(Q)))
            assert lhs.max_abs_diff(rhs) < 1e-12


class TestPolarCalculus:
    def test_radial_difference_rule(self, ctx_small):
        # dbar p(y) = -z (p(y) - p(q^2 y)) / (y - q^2 y) dz* checked on y^3
        p = to_polar(NormalPoly.y(Q) ** 3, ctx_small)
        g = dbar_polar(p, ctx_small)
        lat = ctx_small.lattice()
        want = -(lat**3 - (Q * Q * lat) ** 3) / (lat - Q * Q * lat)
        assert np.max(np.abs(g.mode(1) - want)) < 1e-13

    def test_polar_matches_exact_engine(self, ctx_small, rng):
        # lattice-difference path == normal-ordered Leibniz path
        for _ in range(15):
            f = random_poly(rng, Q, 4)
            pf = to_polar(f, ctx_small)
            got = dbar_polar(pf, ctx_small)
            want = to_polar(del_r_zs(f), ctx_small)
            assert got.max_abs_diff(want) < 1e-11
            got2 = del_polar(pf, ctx_small)
            want2 = to_polar(del_l_z(f), ctx_small)
            assert got2.max_abs_diff(want2) < 1e-11


class TestTwisted:
    def test_weight_zero_reduces_to_dbar(self, rng):
        f = random_poly(rng, Q, 3)
        s = TwistedSection(0, f, 0.0)
        out = dbar_twisted(s)
        assert out.grade == 1
        assert out.coeff.max_abs_diff(del_r_zs(f)) == 0.0

    def test_kills_generator(self):
        s = TwistedSection(0, NormalPoly.unit(Q), 1.7)
        assert dbar_twisted(s).coeff.max_abs_diff(NormalPoly.zero(Q)) == 0.0

    def test_holomorphic_coefficient(self):
        s = TwistedSection(0, NormalPoly.z(Q), -0.8)
        assert dbar_twisted(s).coeff.max_abs_diff(NormalPoly.zero(Q)) == 0.0

    def test_leibniz_against_untwisted(self, rng):
        # coefficient rule: dbar(f v) = q^lambda (del_r f / del z*) v dz*
        lam = 1.3
        f = random_poly(rng, Q, 3)
        out = dbar_twisted(TwistedSection(0, f, lam))
        want = (Q**lam) * del_r_zs(f)
        assert out.coeff.max_abs_diff(want) < 1e-13
