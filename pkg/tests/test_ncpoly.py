"""Normal-ordering engine and expression parser."""

import numpy as np
import pytest

from qdisc.errors import ExprOverflowError, ExprSyntaxError
from qdisc.ncpoly import BoundaryPoly, NormalPoly, involution, normal_multiply, random_poly
from qdisc.parser import parse_expr
from qdisc.polar import to_polar

Q = 0.5


def test_defining_relation():
    zs, z = NormalPoly.zstar(Q), NormalPoly.z(Q)
    got = normal_multiply(zs, z)
    want = NormalPoly({(1, 1): Q * Q, (0, 0): 1 - Q * Q}, Q)
    assert got.max_abs_diff(want) == 0.0


def test_unit():
    f = NormalPoly({(2, 1): 1.5 - 0.5j, (0, 3): 2.0}, Q)
    assert (f * NormalPoly.unit(Q)).max_abs_diff(f) == 0.0
    assert (NormalPoly.unit(Q) * f).max_abs_diff(f) == 0.0


def test_zstar_z_powers_polar_form():
    # z*^n z^n = (q^2 y; q^2)_n
    zs, z = NormalPoly.zstar(Q), NormalPoly.z(Q)
    for n in (1, 2, 3):
        got = zs**n * z**n
        want = NormalPoly.unit(Q)
        y = NormalPoly.y(Q)
        for i in range(n):
            want = want * (NormalPoly.unit(Q) - Q ** (2 * i + 2) * y)
        assert got.max_abs_diff(want) < 1e-14


def test_commutation_relations_with_y():
    # z* y = q^2 y z*  and  z y = q^(-2) y z, as normal forms
    y, z, zs = NormalPoly.y(Q), NormalPoly.z(Q), NormalPoly.zstar(Q)
    assert (zs * y - Q**2 * (y * zs)).max_abs_diff(NormalPoly.zero(Q)) < 1e-15
    assert (z * y - Q**-2 * (y * z)).max_abs_diff(NormalPoly.zero(Q)) < 1e-15


def test_associativity_random(rng):
    for _ in range(40):
        f = random_poly(rng, Q, degree=4)
        g = random_poly(rng, Q, degree=4)
        h = random_poly(rng, Q, degree=4)
        lhs = (f * g) * h
        rhs = f * (g * h)
        scale = max(1.0, max(abs(c) for c in lhs.coeffs.values()))
        assert lhs.max_abs_diff(rhs) < 1e-12 * scale


def test_involution_antihomomorphism(rng):
    for _ in range(30):
        f = random_poly(rng, Q, degree=4)
        g = random_poly(rng, Q, degree=4)
        lhs = involution(f * g)
        rhs = involution(g) * involution(f)
        scale = max(1.0, max(abs(c) for c in lhs.coeffs.values()))
        assert lhs.max_abs_diff(rhs) < 1e-12 * scale
        assert involution(involution(f)).max_abs_diff(f) == 0.0


class TestParser:
    def test_defining_relation_text(self):
        got = parse_expr("z* z", Q)
        want = NormalPoly({(1, 1): Q * Q, (0, 0): 1 - Q * Q}, Q)
        assert got.max_abs_diff(want) < 1e-15

    def test_unit(self):
        assert parse_expr("1", Q).max_abs_diff(NormalPoly.unit(Q)) == 0.0

    def test_y_expansion(self, ctx_small):
        got = parse_expr("y^2", Q)
        want = NormalPoly.y(Q) ** 2
        assert got.max_abs_diff(want) == 0.0
        # cross-check through the polar decomposition: single mode 0, degree 2
        p = to_polar(got, ctx_small)
        assert set(p.modes) == {0}
        lat = ctx_small.lattice()
        assert np.max(np.abs(p.mode(0) - lat**2)) < 1e-14

    def test_whitespace_star_is_product(self):
        got = parse_expr("z * z", Q)
        assert got.max_abs_diff(NormalPoly.monomial(2, 0, Q)) == 0.0

    def test_adjacent_star_is_conjugate(self):
        got = parse_expr("z*z", Q)
        want = parse_expr("z* z", Q)
        assert got.max_abs_diff(want) == 0.0

    def test_complex_literals(self):
        got = parse_expr("2i z + (1 + 0.5i)", Q)
        want = NormalPoly({(1, 0): 2j, (0, 0): 1 + 0.5j}, Q)
        assert got.max_abs_diff(want) == 0.0

    def test_unary_minus_and_powers(self):
        got = parse_expr("-z^2 + z*^2", Q)
        want = NormalPoly({(2, 0): -1.0, (0, 2): 1.0}, Q)
        assert got.max_abs_diff(want) == 0.0

    def test_order_preserved(self):
        # z* z != z z*: the parser must not commute factors
        lhs = parse_expr("z* z", Q)
        rhs = parse_expr("z z*", Q)
        assert lhs.max_abs_diff(rhs) > 0.1

    def test_syntax_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("z + @", Q)
        assert err.value.position == 4

    def test_power_overflow(self):
        with pytest.raises(ExprOverflowError):
            parse_expr("z^200", Q, degree_cap=64)

    def test_roundtrip_random(self, rng):
        for _ in range(10):
            f = random_poly(rng, Q, degree=3)
            text = " + ".join(
                f"({c.real}+{c.imag}i) z^{j} z*^{k}" for (j, k), c in f.coeffs.items()
            )
            if not text:
                continue
            assert parse_expr(text, Q).max_abs_diff(f) < 1e-12


def test_boundary_poly_algebra():
    a = BoundaryPoly({1: 2.0, 0: 1.0})
    b = BoundaryPoly({-1: 1.0})
    assert (a * b).coeff(0) == 2.0
    assert a.star().coeff(-1) == 2.0
    assert abs(a.evaluate(0.3) - (1.0 + 2.0 * np.exp(0.3j))) < 1e-14
