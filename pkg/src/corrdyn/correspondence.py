"""Arithmetic of the (2:2) correspondence family in the big coordinate.

The family is parametrised by a complex number ``a != 1``.  In the big
coordinate it factors as the deleted covering correspondence of
``Q(Z) = Z^3 - 3Z`` (the relation ``Z^2 + Z*W + W^2 = 3``) post-composed
with the Moebius involution fixing ``1`` and ``a``.  This module provides
exact branch arithmetic, coordinate changes, the Taylor data of the
parabolic fixed point at ``Z = 1``, repelling directions, and critical
points.  All operations are pure functions on immutable values.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import _scalar


class SingularDerivativeError(ValueError):
    """Branch derivative requested at a critical point or involution pole."""


@dataclass(frozen=True)
class SpherePoint:
    """A point of the Riemann sphere: a finite complex value or infinity.

    The infinite point has a dedicated mark (``value`` is canonically 0)
    so that every point has exactly one representation.
    """

    value: complex = 0j
    infinite: bool = False

    def __post_init__(self):
        if self.infinite:
            object.__setattr__(self, "value", 0j)
            return
        v = complex(self.value)
        if math.isnan(v.real) or math.isnan(v.imag):
            raise ValueError("finite sphere point with NaN component")
        if math.isinf(v.real) or math.isinf(v.imag):
            raise ValueError("use INFINITY for the point at infinity")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, value) -> "SpherePoint":
        if isinstance(value, SpherePoint):
            return value
        return cls(complex(value))

    @property
    def is_infinite(self) -> bool:
        return self.infinite

    def to_complex(self) -> complex:
        if self.infinite:
            raise ValueError("point at infinity has no complex value")
        return self.value

    def __repr__(self):
        return "SpherePoint(inf)" if self.infinite else f"SpherePoint({self.value!r})"


INFINITY = SpherePoint(infinite=True)

#: The parabolic fixed point of every member of the family (Z = 1).
PARABOLIC_POINT = SpherePoint(1.0 + 0j)
#: Its other preimage under the correspondence (Z = -2).
PARABOLIC_PREIMAGE = SpherePoint(-2.0 + 0j)


def _enc(p) -> complex | None:
    """SpherePoint/complex -> the scalar-layer encoding (None = infinity)."""
    if isinstance(p, SpherePoint):
        return None if p.infinite else p.value
    return complex(p)


def _dec(c) -> SpherePoint:
    return INFINITY if c is None else SpherePoint(c)


@dataclass(frozen=True)
class Parameter:
    """The family parameter ``a``; the correspondence is undefined at 1."""

    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if a == 1.0:
            raise ValueError("correspondence undefined at a = 1")
        object.__setattr__(self, "a", a)

    @property
    def in_disc(self) -> bool:
        """Whether a lies in the closed parameter disc |a - 4| <= 3."""
        d = self.a - 4.0
        return d.real * d.real + d.imag * d.imag <= 9.0

    @property
    def transversality_margin(self) -> float:
        """Angular distance of the repelling axis from the imaginary axis.

        Zero exactly when the standard fundamental-domain boundaries are
        tangent to the parabolic axis (parameters on the boundary circle of
        the disc); at a = 7 the convention is a real parabolic axis, which
        gives the maximal margin pi/2.
        """
        if self.a == 7.0:
            return math.pi / 2
        ang = cmath.phase((self.a.conjugate() - 7.0) / (self.a.conjugate() - 1.0))
        return min(abs(ang - math.pi / 2), abs(ang + math.pi / 2))


def _aval(a) -> complex:
    if isinstance(a, Parameter):
        return a.a
    a = complex(a)
    if a == 1.0:
        raise ValueError("correspondence undefined at a = 1")
    return a


@dataclass(frozen=True)
class MoebiusMap:
    """Z -> (p*Z + q)/(r*Z + s) acting on the sphere."""

    p: complex
    q: complex
    r: complex
    s: complex

    def __post_init__(self):
        for name in "pqrs":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.p * self.s - self.q * self.r == 0:
            raise ValueError("degenerate Moebius map (zero determinant)")

    @classmethod
    def involution(cls, a) -> "MoebiusMap":
        """The involution exchanging the fundamental-domain sides, fixing 1 and a."""
        return cls(*_scalar.j_coefficients(_aval(a)))

    @classmethod
    def small_to_big(cls, a) -> "MoebiusMap":
        return cls(*_scalar.small_to_big_coefficients(_aval(a)))

    @classmethod
    def big_to_small(cls, a) -> "MoebiusMap":
        return cls(*_scalar.big_to_small_coefficients(_aval(a)))

    def coefficients(self) -> tuple[complex, complex, complex, complex]:
        return (self.p, self.q, self.r, self.s)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.s, -self.q, -self.r, self.p)

    def compose(self, inner: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(*_scalar.compose_moebius(self.coefficients(), inner.coefficients()))

    def __call__(self, z) -> SpherePoint:
        return _dec(_scalar.moebius_apply(self.coefficients(), _enc(SpherePoint.of(z)), False))


@dataclass(frozen=True)
class BranchPair:
    """Unordered pair of branch values, stored in canonical order.

    Canonical order: the '+' principal-square-root branch first (for the
    covering correspondence), or the images thereof.
    """

    first: SpherePoint
    second: SpherePoint

    def as_tuple(self) -> tuple[SpherePoint, SpherePoint]:
        return (self.first, self.second)

    def __iter__(self):
        return iter(self.as_tuple())

    def contains(self, p, tol: float = 1e-9) -> bool:
        p = SpherePoint.of(p)
        for m in self.as_tuple():
            if m.infinite and p.infinite:
                return True
            if not m.infinite and not p.infinite and abs(m.value - p.value) <= tol:
                return True
        return False


@dataclass(frozen=True)
class TaylorJet:
    """Coefficients of zeta^2..zeta^4 of the branch fixing the parabolic point."""

    c2: complex
    c3: complex
    c4: complex


def cov_residual(Z, W) -> float:
    """Normalized residual of the covering relation at a candidate pair."""
    Z = SpherePoint.of(Z)
    W = SpherePoint.of(W)
    if Z.infinite or W.infinite:
        return 0.0 if (Z.infinite and W.infinite) else math.inf
    z, w = Z.value, W.value
    scale = max(1.0, abs(z) ** 2)
    return abs(z * z + z * w + w * w - 3.0) / scale


def cov0_branches(Z) -> BranchPair:
    """Both partners W of Z under the deleted covering correspondence.

    The quadratic in W is solved stably: the larger root comes from the
    quadratic formula with the principal square root of ``12 - 3Z^2``
    (branch cut along the negative real radicand axis), the other from the
    Vieta product ``W+ * W- = Z^2 - 3``.  The '+' root is always first.
    """
    Zp = SpherePoint.of(Z)
    if Zp.infinite:
        return BranchPair(INFINITY, INFINITY)
    z = Zp.value
    s = cmath.sqrt(12.0 - 3.0 * z * z)
    w_plus = 0.5 * (-z + s)
    w_minus = 0.5 * (-z - s)
    prod = z * z - 3.0
    if abs(w_plus) >= abs(w_minus):
        if w_plus != 0.0:
            w_minus = prod / w_plus
    else:
        if w_minus != 0.0:
            w_plus = prod / w_minus
    return BranchPair(SpherePoint(w_plus), SpherePoint(w_minus))


def j_involution(a, Z) -> SpherePoint:
    """Apply the involution fixing 1 and a; total on the sphere."""
    return _dec(_scalar.moebius_apply(_scalar.j_coefficients(_aval(a)), _enc(SpherePoint.of(Z)), False))


def f_images(a, Z) -> BranchPair:
    """The two forward images of Z: the involution applied to both cov partners."""
    w1, w2 = cov0_branches(Z)
    return BranchPair(j_involution(a, w1), j_involution(a, w2))


def f_preimages(a, W) -> BranchPair:
    """The two backward images of W: cov partners of the involuted point."""
    return cov0_branches(j_involution(a, W))


def coordinate_change(a, z, direction: str = "small_to_big") -> SpherePoint:
    """Moebius change between the small coordinate (parabolic point at 0)
    and the big coordinate (parabolic point at 1)."""
    key = direction.replace("-", "_")
    if key == "small_to_big":
        coeffs = _scalar.small_to_big_coefficients(_aval(a))
    elif key == "big_to_small":
        coeffs = _scalar.big_to_small_coefficients(_aval(a))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return _dec(_scalar.moebius_apply(coeffs, _enc(SpherePoint.of(z)), False))


def parabolic_jet(a) -> TaylorJet:
    """Closed-form Taylor coefficients of the branch fixing the parabolic point.

    c2 = (a-7)/(3(a-1)), c3 = c2^2, and
    c4 = 2/27 - 2/(3(a-1)) + 4/(a-1)^2 - 8/(a-1)^3.
    """
    a = _aval(a)
    c2 = (a - 7.0) / (3.0 * (a - 1.0))
    u = 1.0 / (a - 1.0)
    c4 = 2.0 / 27.0 - (2.0 / 3.0) * u + 4.0 * u * u - 8.0 * u * u * u
    return TaylorJet(c2=c2, c3=c2 * c2, c4=c4)


def fixed_branch_value(a, zeta: complex) -> complex:
    """The branch of the correspondence fixing the parabolic point,
    evaluated in the local coordinate zeta = Z - 1."""
    a = _aval(a)
    z = 1.0 + zeta
    s = cmath.sqrt(12.0 - 3.0 * z * z)
    w = 0.5 * (-z + s)
    img = _scalar.moebius_apply(_scalar.j_coefficients(a), w, False)
    if img is None:
        raise ValueError("branch evaluation hit the involution pole")
    return img - 1.0


def repelling_directions(a) -> tuple[complex, ...]:
    """Unit repelling direction(s) at the parabolic fixed point.

    One direction for a != 7 (where the quadratic coefficient is nonzero),
    three at a = 7 with arguments 0, 2*pi/3 and 4*pi/3.
    """
    a = _aval(a)
    if a == 7.0:
        return (complex(1.0, 0.0), cmath.exp(2j * math.pi / 3), cmath.exp(4j * math.pi / 3))
    d = (a.conjugate() - 7.0) / (a.conjugate() - 1.0)
    return (d / abs(d),)


def forward_critical_points(a) -> list[tuple[SpherePoint, SpherePoint]]:
    """Finite critical points of the forward correspondence with their values.

    Implicit differentiation of the covering relation gives dW/dZ =
    -(2Z + W)/(Z + 2W), zero exactly at (Z, W) = (1, -2) and (-1, 2); the
    critical values are the involution images of the colliding partners.
    """
    a = _aval(a)
    return [
        (SpherePoint(1.0 + 0j), j_involution(a, -2.0 + 0j)),
        (SpherePoint(-1.0 + 0j), j_involution(a, 2.0 + 0j)),
    ]


def branch_derivative(a, Z, W) -> complex:
    """Derivative of the branch Z -> J(W(Z)) tracked through the pair (Z, W).

    Requires (Z, W) to satisfy the covering relation.  Raises
    SingularDerivativeError at branch critical points (Z + 2W = 0) and at
    the involution pole.
    """
    a = _aval(a)
    Zp, Wp = SpherePoint.of(Z), SpherePoint.of(W)
    if Zp.infinite or Wp.infinite:
        raise ValueError("branch derivative undefined in this chart at infinity")
    z, w = Zp.value, Wp.value
    if cov_residual(z, w) > 1e-6:
        raise ValueError("(Z, W) do not satisfy the covering relation")
    den_cov = z + 2.0 * w
    if den_cov == 0.0:
        raise SingularDerivativeError("critical point of the covering branch")
    den_j = 2.0 * w - (a + 1.0)
    if den_j == 0.0:
        raise SingularDerivativeError("involution pole along the branch")
    jprime = -((a - 1.0) ** 2) / (den_j * den_j)
    return jprime * (-(2.0 * z + w) / den_cov)
