"""The parabolic quadratic family z -> z + 1/z + A.

Quadratic rational maps normalised to have a multiplier-1 parabolic fixed
point at infinity and critical points at +-1; conjugacy classes satisfy
A ~ -A.  Filled-Julia membership is the complement of the parabolic basin
of infinity, detected by sustained monotone growth past an escape radius
(drift toward infinity is linear in the parabolic basin, so a bare radius
test is not enough).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _scalar
from .correspondence import INFINITY, SpherePoint, _dec, _enc
from .dynamics import Classification, Verdict

DEFAULT_ESCAPE_RADIUS = 1e4


@dataclass(frozen=True)
class CapParameter:
    """Family parameter, stored as the canonical representative of {A, -A}."""

    A: complex

    def __post_init__(self):
        object.__setattr__(self, "A", canonical_parameter(self.A))


def canonical_parameter(A) -> complex:
    A = complex(A)
    if A.real > 0:
        return A
    if A.real < 0:
        return -A
    return A if A.imag >= 0 else -A


def p_step(A, z) -> SpherePoint:
    """One application of z + 1/z + A on the sphere (0 and inf map to inf)."""
    return _dec(_scalar.per11_step(complex(A), _enc(SpherePoint.of(z))))


def critical_points() -> tuple[SpherePoint, SpherePoint]:
    return (SpherePoint(1.0 + 0j), SpherePoint(-1.0 + 0j))


def derivative(z: complex) -> complex:
    return 1.0 - 1.0 / (z * z)


def classify_filled_julia(A, z, max_iter: int = 1000,
                          escape_radius: float = DEFAULT_ESCAPE_RADIUS) -> Classification:
    """Escape-time verdict against the parabolic basin of infinity.

    A = 0 is the special member with two parabolic petals, where both
    petals attract to infinity and escape detection is meaningless; there
    the filled set is the closed left half-plane, applied in closed form.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    A = complex(A)
    zp = SpherePoint.of(z)
    if A == 0.0:
        if zp.infinite or zp.value.real > 0.0:
            return Classification(Verdict.ESCAPED, 0, zp)
        return Classification(Verdict.BOUNDED, max_iter, zp)
    code, step = _scalar.classify_per11_point(
        A, _enc(zp), max_iter, escape_radius * escape_radius)
    if code == _scalar.ESCAPED:
        return Classification(Verdict.ESCAPED, step, zp)
    return Classification(Verdict.BOUNDED, max_iter, zp)
