"""Scalar q-special functions: Pochhammer symbols, q-gamma, basic
hypergeometric series and Jackson integration.

All routines are pure functions of their arguments; complex powers use the
principal branch throughout.
"""

import cmath

from .errors import DivergenceError, ParameterPoleError, PoleError

_MAX_PRODUCT_TERMS = 100_000


def qpoch_finite(t, q, m):
    """Finite q-Pochhammer symbol (t; q)_m = prod_{j<m} (1 - t q^j).

    The empty product (m = 0) is exactly 1.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = complex(1.0)
    tq = complex(t)
    for _ in range(m):
        out *= 1.0 - tq
        tq *= q
    return out


def qpoch_infinite(t, q, tol=1e-14):
    """Infinite q-Pochhammer symbol (t; q)_inf for |q| < 1.

    The product is truncated once |t q^j| < tol and the remaining tail is
    absorbed to first order, so the relative error is of order tol.
    """
    if abs(q) >= 1.0:
        raise ValueError("|q| must be < 1 for the infinite product")
    out = complex(1.0)
    tq = complex(t)
    for _ in range(_MAX_PRODUCT_TERMS):
        if abs(tq) < tol:
            break
        out *= 1.0 - tq
        tq *= q
    # first-order tail: prod_{j>=J}(1 - t q^j) ~ 1 - t q^J / (1 - q)
    return out * (1.0 - tq / (1.0 - q))


def qpoch_complex_exp(a, q2, gamma, tol=1e-14):
    """Complex-exponent symbol (a; q2)_gamma = (a; q2)_inf / (a q2^gamma; q2)_inf.

    q2^gamma is the principal power.  Raises PoleError when the denominator
    vanishes.
    """
    num = qpoch_infinite(a, q2, tol)
    den = qpoch_infinite(complex(a) * q2 ** complex(gamma), q2, tol)
    if abs(den) < 1e-250:
        raise PoleError(f"(a q^(2 gamma); q^2)_inf vanishes for a={a}, gamma={gamma}")
    return num / den


def qgamma(x, q, tol=1e-14):
    """q-gamma function (q; q)_inf / (q^x; q)_inf * (1-q)^(1-x).

    Principal branches for q^x and (1-q)^(1-x); poles at x = 0, -1, -2, ...
    raise PoleError.
    """
    qx = q ** complex(x)
    # pole iff some factor 1 - q^(x+j) vanishes
    fac = qx
    for _ in range(_MAX_PRODUCT_TERMS):
        if abs(1.0 - fac) < 1e-12:
            raise PoleError(f"q-gamma pole at x = {x}")
        if abs(fac) < tol:
            break
        fac *= q
    num = qpoch_infinite(q, q, tol)
    den = qpoch_infinite(qx, q, tol)
    return num / den * (1.0 - q) ** (1.0 - complex(x))


def basic_hyper(upper, lower, q, z, max_terms=10_000, tol=1e-14):
    """Basic hypergeometric series rPhis(upper; lower; q; z).

    Term n carries the factor ((-1)^n q^(n(n-1)/2))^(1+s-r) beside the
    Pochhammer quotients; terminating series (an upper parameter q^(-n))
    are summed exactly.  Raises DivergenceError when term magnitudes grow
    for three consecutive steps and ParameterPoleError when a denominator
    factor vanishes while the numerator does not.
    """
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    r, s = len(upper), len(lower)
    phase_exp = 1 + s - r

    # a terminating series (some upper parameter q^(-n)) may grow before it
    # breaks; divergence detection is disabled for those
    terminates = None
    for a in upper:
        fac = a
        for j in range(max_terms):
            if abs(fac - 1.0) < 1e-9:
                terminates = j if terminates is None else min(terminates, j)
                break
            fac *= q
            if abs(fac) < 1.0 - abs(q):
                break

    total = complex(0.0)
    term = complex(1.0)
    qn = complex(1.0)  # q^n
    grow = 0
    small = 0
    prev_mag = None
    for n in range(max_terms):
        total += term
        num = complex(1.0)
        terminated = False
        for a in upper:
            f = 1.0 - a * qn
            if abs(f) <= 1e-14 * (1.0 + abs(a * qn)):
                terminated = True
            num *= f
        if terminated:
            break
        den = complex(1.0)
        for b in lower:
            f = 1.0 - b * qn
            if abs(f) <= 1e-15 * (1.0 + abs(b * qn)):
                raise ParameterPoleError(
                    f"lower parameter {b} hits a pole at series index {n}"
                )
            den *= f
        den *= 1.0 - q * qn
        ratio = num / den * z
        if phase_exp:
            ratio *= (-qn) ** phase_exp
        term = term * ratio
        qn *= q

        mag = abs(term)
        if terminates is None and prev_mag is not None and mag > prev_mag:
            grow += 1
            if grow >= 3:
                raise DivergenceError("series terms grew for 3 consecutive steps")
        else:
            grow = 0
        prev_mag = mag
        if mag <= tol * max(1.0, abs(total)):
            small += 1
            if small >= 2:
                total += term
                break
        else:
            small = 0
    return total


def jackson_integral_01(f, q2, tol=1e-14, max_terms=_MAX_PRODUCT_TERMS):
    """Jackson integral of f over [0, 1]: (1-q2) sum_m f(q2^m) q2^m.

    f is evaluated on the lattice q2^m; the sum stops once the running term
    falls below tol relative to the accumulated value.
    """
    total = complex(0.0)
    t = 1.0
    for _ in range(max_terms):
        term = complex(f(t)) * t
        total += term
        if abs(term) <= tol * max(1.0, abs(total)) and t < 0.5:
            break
        t *= q2
    return (1.0 - q2) * total
