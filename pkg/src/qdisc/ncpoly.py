"""Normal-ordered polynomials in the quantum-disc generators.

Elements are stored as coefficient maps (j, k) -> a_jk for sums of
z^j z*^k, normal order fixed with all z powers to the left.  The single
rewriting rule is z* z = q^2 z z* + (1 - q^2), applied to termination by
``normal_multiply``.
"""

from __future__ import annotations

import cmath

import numpy as np

_ZERO_TOL = 0.0  # exact arithmetic: only literal zeros are dropped


class NormalPoly:
    """Finite sum a_jk z^j z*^k with complex coefficients."""

    __slots__ = ("coeffs", "q")

    def __init__(self, coeffs, q):
        self.q = float(q)
        self.coeffs = {
            (int(j), int(k)): complex(c)
            for (j, k), c in coeffs.items()
            if c != 0
        }

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, q):
        return cls({}, q)

    @classmethod
    def unit(cls, q, scale=1.0):
        return cls({(0, 0): scale}, q)

    @classmethod
    def z(cls, q):
        return cls({(1, 0): 1.0}, q)

    @classmethod
    def zstar(cls, q):
        return cls({(0, 1): 1.0}, q)

    @classmethod
    def y(cls, q):
        """1 - z z*."""
        return cls({(0, 0): 1.0, (1, 1): -1.0}, q)

    @classmethod
    def monomial(cls, j, k, q, coeff=1.0):
        return cls({(j, k): coeff}, q)

    # -- ring structure ------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return NormalPoly(out, self.q)

    def __sub__(self, other):
        return self + (-1.0) * self._coerce(other)

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar):
        if isinstance(scalar, NormalPoly):
            return NotImplemented
        return NormalPoly({k: scalar * c for k, c in self.coeffs.items()}, self.q)

    def __mul__(self, other):
        if isinstance(other, NormalPoly):
            return normal_multiply(self, other)
        return NormalPoly({k: other * c for k, c in self.coeffs.items()}, self.q)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not polynomial")
        out = NormalPoly.unit(self.q)
        for _ in range(n):
            out = normal_multiply(out, self)
        return out

    def _coerce(self, other):
        if isinstance(other, NormalPoly):
            if other.q != self.q:
                raise ValueError("mixing polynomials with different q")
            return other
        return NormalPoly.unit(self.q, other)

    # -- queries --------------------------------------------------------
    def degree(self):
        return max((j + k for j, k in self.coeffs), default=0)

    def prune(self, tol=1e-15):
        scale = max((abs(c) for c in self.coeffs.values()), default=0.0)
        if scale == 0.0:
            return NormalPoly.zero(self.q)
        return NormalPoly(
            {k: c for k, c in self.coeffs.items() if abs(c) > tol * scale}, self.q
        )

    def max_abs_diff(self, other):
        other = self._coerce(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return max(
            (abs(self.coeffs.get(k, 0.0) - other.coeffs.get(k, 0.0)) for k in keys),
            default=0.0,
        )

    def __repr__(self):
        return f"NormalPoly({format_poly(self)!r}, q={self.q})"

    def __str__(self):
        return format_poly(self)


def _right_mul_z(coeffs, q):
    """Multiply by z on the right: z^j z*^k z = q^(2k) z^(j+1) z*^k + (1-q^(2k)) z^j z*^(k-1)."""
    out = {}
    for (j, k), c in coeffs.items():
        qk = q ** (2 * k)
        key = (j + 1, k)
        out[key] = out.get(key, 0.0) + c * qk
        if k > 0:
            key = (j, k - 1)
            out[key] = out.get(key, 0.0) + c * (1.0 - qk)
    return out


def normal_multiply(f: NormalPoly, g: NormalPoly) -> NormalPoly:
    """Product in the quantum-disc algebra, result normal-ordered."""
    if f.q != g.q:
        raise ValueError("mixing polynomials with different q")
    q = f.q
    max_j = max((j for j, _ in g.coeffs), default=0)
    # f z^m computed incrementally; appending z*^n is a plain index shift
    powers = [dict(f.coeffs)]
    for _ in range(max_j):
        powers.append(_right_mul_z(powers[-1], q))
    out = {}
    for (m, n), cg in g.coeffs.items():
        for (j, k), cf in powers[m].items():
            key = (j, k + n)
            out[key] = out.get(key, 0.0) + cf * cg
    return NormalPoly(out, q)


def involution(f: NormalPoly) -> NormalPoly:
    """Algebra involution: (z^j z*^k)* = z^k z*^j with conjugated coefficients."""
    return NormalPoly(
        {(k, j): c.conjugate() for (j, k), c in f.coeffs.items()}, f.q
    )


def format_poly(f: NormalPoly, tol=1e-12) -> str:
    """Human-readable normal form, e.g. ``q^2 z z* + (1-q^2)`` rendered numerically."""
    if not f.coeffs:
        return "0"
    parts = []
    for (j, k) in sorted(f.coeffs, key=lambda jk: (jk[0] + jk[1], jk[0])):
        c = f.coeffs[(j, k)]
        if abs(c.imag) < tol * max(1.0, abs(c)):
            cs = f"{c.real:.12g}"
        else:
            cs = f"({c.real:.12g}{c.imag:+.12g}i)"
        mono = " ".join(filter(None, [f"z^{j}" if j > 1 else "z" * j,
                                      f"z*^{k}" if k > 1 else "z*" * k]))
        parts.append(f"{cs} {mono}".strip() if mono else cs)
    return " + ".join(parts)


class BoundaryPoly:
    """Finite Laurent sum a_m e^(i m theta) on the boundary circle."""

    __slots__ = ("laurent",)

    def __init__(self, laurent):
        self.laurent = {int(m): complex(c) for m, c in laurent.items() if c != 0}

    @classmethod
    def one(cls):
        return cls({0: 1.0})

    def __add__(self, other):
        out = dict(self.laurent)
        for m, c in other.laurent.items():
            out[m] = out.get(m, 0.0) + c
        return BoundaryPoly(out)

    def __mul__(self, other):
        if isinstance(other, BoundaryPoly):
            out = {}
            for m1, c1 in self.laurent.items():
                for m2, c2 in other.laurent.items():
                    out[m1 + m2] = out.get(m1 + m2, 0.0) + c1 * c2
            return BoundaryPoly(out)
        return BoundaryPoly({m: other * c for m, c in self.laurent.items()})

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + other * (-1.0)

    def star(self):
        return BoundaryPoly({-m: c.conjugate() for m, c in self.laurent.items()})

    def coeff(self, m):
        return self.laurent.get(m, 0.0 + 0.0j)

    def max_abs(self):
        return max((abs(c) for c in self.laurent.values()), default=0.0)

    def max_abs_diff(self, other):
        keys = set(self.laurent) | set(other.laurent)
        return max(
            (abs(self.coeff(m) - other.coeff(m)) for m in keys), default=0.0
        )

    def evaluate(self, theta):
        return sum(c * cmath.exp(1j * m * theta) for m, c in self.laurent.items())

    def __repr__(self):
        return f"BoundaryPoly({self.laurent!r})"


def random_poly(rng, q, degree=4, n_terms=6) -> NormalPoly:
    """Random normal polynomial with complex coefficients, for tests."""
    coeffs = {}
    for _ in range(n_terms):
        j = int(rng.integers(0, degree + 1))
        k = int(rng.integers(0, degree + 1 - j))
        c = complex(rng.standard_normal(), rng.standard_normal())
        coeffs[(j, k)] = coeffs.get((j, k), 0.0) + c
    return NormalPoly(coeffs, q)
