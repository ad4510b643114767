"""Scalar classification arithmetic shared by every engine.

The covering correspondence on the sphere is ``Z^2 + Z*W + W^2 = 3`` (the
deleted covering correspondence of ``Q(Z) = Z^3 - 3Z``); composing its two
branches with the Moebius involution fixing ``1`` and the family parameter
``a`` gives the two forward images of a point.  Escape-time classification
iterates the branch restricted to the closed exterior of a round disc.

Everything here is written against plain ``complex`` with ``None`` encoding
the point at infinity.  The compiled kernel in ``_kernels_cy.pyx`` mirrors
these routines operation for operation (including CPython's complex
division and square-root algorithms), so both engines produce bit-identical
classifications.  Do not "simplify" an expression in one place without
changing the other.
"""

from __future__ import annotations

import cmath
import math

# Components beyond this magnitude collapse to the infinity mark.  Keeps
# Z*Z clear of overflow while being far outside any dynamically relevant
# region (orbits passing near the involution pole re-enter moderate scales
# after one step).
INF_LIMIT = 1e150

# Relative fattening of the closed disc exterior used by the classifiers:
# points within one part in 1e12 of the boundary circle count as members,
# so the parabolic fixed point stays a member under roundoff.
DJ_BOUNDARY_SLACK = 1e-12

BOUNDED = 0
ESCAPED = 1
MASKED = 2


def j_coefficients(a: complex) -> tuple[complex, complex, complex, complex]:
    """Moebius coefficients of the involution with fixed points 1 and a."""
    return (a + 1.0, -(2.0 * a), complex(2.0, 0.0), -(a + 1.0))


def small_to_big_coefficients(a: complex) -> tuple[complex, complex, complex, complex]:
    """z -> (a*z + 1)/(z + 1)."""
    return (a, complex(1.0, 0.0), complex(1.0, 0.0), complex(1.0, 0.0))


def big_to_small_coefficients(a: complex) -> tuple[complex, complex, complex, complex]:
    """Inverse of the small-to-big change: Z -> (Z - 1)/(-Z + a)."""
    return (complex(1.0, 0.0), complex(-1.0, 0.0), complex(-1.0, 0.0), a)


def compose_moebius(outer, inner):
    """Coefficients of outer∘inner (2x2 matrix product)."""
    op, oq, orr, os_ = outer
    ip, iq, ir, is_ = inner
    return (op * ip + oq * ir, op * iq + oq * is_,
            orr * ip + os_ * ir, orr * iq + os_ * is_)


def moebius_apply(coeffs, z, promote: bool):
    """Apply (p*z + q)/(r*z + s) on the sphere.

    ``None`` encodes infinity on both sides.  With ``promote`` set, results
    with a component beyond INF_LIMIT collapse to infinity as well.
    """
    p, q, r, s = coeffs
    if z is None:
        if r == 0.0:
            return None
        w = p / r
    else:
        den = r * z + s
        if den == 0.0:
            return None
        w = (p * z + q) / den
    if promote and (abs(w.real) > INF_LIMIT or abs(w.imag) > INF_LIMIT):
        return None
    return w


def cov_candidates(z: complex) -> tuple[complex, complex]:
    """Both covering-correspondence partners of a finite point, '+' root first."""
    s = cmath.sqrt(12.0 - 3.0 * z * z)
    return 0.5 * (-z + s), 0.5 * (-z - s)


def step_candidates(jc, z):
    """The two forward images of ``z`` under the correspondence.

    ``jc`` holds the involution coefficients; infinity has the single
    (doubled) image p/r.
    """
    if z is None:
        w = moebius_apply(jc, None, True)
        return w, w
    w1, w2 = cov_candidates(z)
    return moebius_apply(jc, w1, True), moebius_apply(jc, w2, True)


def dj_depth(x0: float, c) -> float:
    """Squared distance from the disc centre; +inf for the infinity mark."""
    if c is None:
        return math.inf
    dx = c.real - x0
    return dx * dx + c.imag * c.imag


def dj_radius_sq_slack(r: float) -> float:
    return r * r * (1.0 - DJ_BOUNDARY_SLACK)


def disc_parameters(a: complex) -> tuple[float, float]:
    """Centre and radius of the circle through 1 and a with real centre."""
    x0 = (a.real * a.real + a.imag * a.imag - 1.0) / (2.0 * (a.real - 1.0))
    r = abs(x0 - 1.0)
    return x0, r


def choose_inner(c1, c2, d1: float, d2: float, r2s: float):
    """Resolve a branch step: keep the member candidate, deeper one on ties.

    Returns ``(next_point, n_inside)``; ``n_inside == 0`` signals that both
    candidates left the closed exterior (escape).
    """
    in1 = d1 >= r2s
    in2 = d2 >= r2s
    if in1 and in2:
        return (c1 if d1 >= d2 else c2), 2
    if in1:
        return c1, 1
    if in2:
        return c2, 1
    return None, 0


def classify_point(jc, x0: float, r2s: float, z0, max_iter: int) -> tuple[int, int]:
    """Escape-time verdict for one point: (code, step)."""
    if dj_depth(x0, z0) < r2s:
        return ESCAPED, 0
    z = z0
    for k in range(1, max_iter + 1):
        c1, c2 = step_candidates(jc, z)
        d1 = dj_depth(x0, c1)
        d2 = dj_depth(x0, c2)
        z, n = choose_inner(c1, c2, d1, d2, r2s)
        if n == 0:
            return ESCAPED, k
    return BOUNDED, max_iter


def mset_setup(a: complex):
    """Per-parameter setup for the parameter-plane classifier.

    Returns ``(x0, r2_slack, z0)`` with ``z0`` the free critical value
    2/(3-a), or ``None`` when the parameter is masked (outside the
    parameter disc |a-4| <= 3, or the undefined value a = 1).
    """
    dre = a.real - 4.0
    if dre * dre + a.imag * a.imag > 9.0:
        return None
    if a == 1.0:
        return None
    x0, r = disc_parameters(a)
    r2s = dj_radius_sq_slack(r)
    den = 3.0 - a
    if den == 0.0:
        z0 = None
    else:
        z0 = 2.0 / den
        if abs(z0.real) > INF_LIMIT or abs(z0.imag) > INF_LIMIT:
            z0 = None
    return x0, r2s, z0


def per11_step(A: complex, z):
    """One application of z -> z + 1/z + A on the sphere."""
    if z is None or z == 0.0:
        return None
    w = z + 1.0 / z + A
    if abs(w.real) > INF_LIMIT or abs(w.imag) > INF_LIMIT:
        return None
    return w


def classify_per11_point(A: complex, z0, max_iter: int, radius_sq: float) -> tuple[int, int]:
    """Escape-time verdict for the parabolic quadratic family.

    Escape requires |z| above the radius for three consecutive steps with
    |z| strictly increasing (drift toward the parabolic basin of infinity
    is linear, so a bare radius test misclassifies slow orbits).
    """
    if z0 is None:
        return ESCAPED, 0
    z = z0
    prev = z0.real * z0.real + z0.imag * z0.imag
    streak = 0
    for k in range(1, max_iter + 1):
        z = per11_step(A, z)
        if z is None:
            return ESCAPED, k
        m = z.real * z.real + z.imag * z.imag
        if m > radius_sq and m > prev:
            streak += 1
        else:
            streak = 0
        prev = m
        if streak >= 3:
            return ESCAPED, k
    return BOUNDED, max_iter
