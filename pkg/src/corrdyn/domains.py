"""Geometry of the standard fundamental-domain pair.

One domain is the open region of the big coordinate plane to the right of
the boundary curve traced by the covering correspondence over the ray
``(-inf, -2]``; eliminating the parameter shows that curve is the right
branch of the hyperbola ``x^2 - y^2/3 = 1``, so membership is an O(1)
predicate.  The other domain is the open exterior of the round disc with
real centre whose boundary passes through ``1`` and ``a``.  A numerical
check verifies that the pair covers the sphere minus the parabolic point
and reports how far the configuration is from the tangent (degenerate)
regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _scalar
from .correspondence import INFINITY, Parameter, SpherePoint

# Relative fuzz for the open-set coverage predicates: strict inequalities
# cannot be certified closer to a boundary than roundoff allows.
_COVER_EPS = 1e-12


@dataclass(frozen=True)
class StandardDomains:
    """Data of the standard pair for one parameter value.

    ``center``/``radius`` describe the boundary circle of the disc whose
    open exterior is the involution fundamental domain.
    """

    a: complex
    center: float
    radius: float
    in_parameter_disc: bool

    @classmethod
    def for_parameter(cls, a) -> "StandardDomains":
        a = a.a if isinstance(a, Parameter) else complex(a)
        if a == 1.0:
            raise ValueError("correspondence undefined at a = 1")
        if a.real == 1.0:
            raise ValueError("disc centre undefined for Re a = 1 (outside the parameter disc)")
        x0, r = _scalar.disc_parameters(a)
        d = a - 4.0
        in_disc = d.real * d.real + d.imag * d.imag <= 9.0
        return cls(a=a, center=x0, radius=r, in_parameter_disc=in_disc)

    @property
    def radius_sq_slack(self) -> float:
        """Slack-fattened squared radius used by the escape classifiers."""
        return _scalar.dj_radius_sq_slack(self.radius)


def l_prime(t: float, sign: int = 1) -> SpherePoint:
    """Parametrization of the covering-domain boundary curve.

    ``(1 + t/2) + sign*i*sqrt(3(t + t^2/4))`` for t >= 0; the point is the
    covering partner of ``-2 - t``.  ``t = inf`` gives the point at
    infinity.
    """
    if t < 0:
        raise ValueError("curve parameter must be nonnegative")
    if math.isinf(t):
        return INFINITY
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    y = math.sqrt(3.0 * (t + 0.25 * t * t))
    return SpherePoint(complex(1.0 + 0.5 * t, sign * y))


def in_delta_cov(Z) -> bool:
    """Open region to the right of the boundary curve: Re Z > 0 and
    (Re Z)^2 - (Im Z)^2/3 > 1.  Infinity is not a member."""
    Z = SpherePoint.of(Z)
    if Z.infinite:
        return False
    x, y = Z.value.real, Z.value.imag
    return x > 0.0 and x * x - y * y / 3.0 > 1.0


def in_delta_j(s: StandardDomains, Z, closed: bool = False) -> bool:
    """Exterior of the disc: open (>) or closed (>=) variant.  Infinity is
    a member of both."""
    Z = SpherePoint.of(Z)
    if Z.infinite:
        return True
    d = abs(Z.value - s.center)
    return d >= s.radius if closed else d > s.radius


@dataclass(frozen=True)
class CheckRow:
    name: str
    passed: bool
    value: float
    detail: str = ""

    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass(frozen=True)
class KleinReport:
    a: complex
    passed: bool
    tangent_regime: bool
    transversality_margin: float
    rows: tuple[CheckRow, ...] = field(default_factory=tuple)

    def to_text(self) -> str:
        lines = [f"klein_check  a = {self.a}"]
        width = max(len(r.name) for r in self.rows)
        for r in self.rows:
            lines.append(f"  {r.name:<{width}}  {r.status()}  {r.value:< 12.4e}  {r.detail}")
        lines.append(f"  overall: {'PASS' if self.passed else 'FAIL'}"
                     f"{'  (tangent regime)' if self.tangent_regime else ''}")
        return "\n".join(lines)


def _sphere_grid(n: int) -> np.ndarray:
    """n*n finite sample points spread over the sphere (polar stereographic
    spacing); the infinity point is handled separately by the caller."""
    i = np.arange(1, n + 1, dtype=np.float64)
    theta = math.pi * i / n
    phi = 2.0 * math.pi * np.arange(n, dtype=np.float64) / n
    rho = np.cos(theta / 2.0) / np.sin(theta / 2.0)
    pts = rho[:, None] * np.exp(1j * phi)[None, :]
    return pts.ravel()


def klein_check(s: StandardDomains, sphere_samples: int = 512,
                boundary_samples: int = 10000,
                margin_threshold: float = 1e-8) -> KleinReport:
    """Numerical verification that the standard pair covers the sphere
    minus the parabolic point, with tangency diagnostics.

    Reports failure (never raises): coverage of a sphere grid, positive
    separation of the two boundary curves away from the parabolic point,
    the location of their closest approach, and the transversality margin
    of the parabolic axis.  Parameters on the boundary of the parameter
    disc fail via a vanishing margin.
    """
    x0, r = s.center, s.radius
    rows = []

    # (1) grid coverage: every sample (except near 1) in one open domain.
    pts = _sphere_grid(sphere_samples)
    x, y = pts.real, pts.imag
    hyper = x * x - y * y / 3.0
    scale_h = 1.0 + np.abs(hyper)
    in_cov = (x > 0.0) & (hyper - 1.0 > -_COVER_EPS * scale_h)
    d2 = (x - x0) ** 2 + y ** 2
    in_dj = d2 - r * r > -_COVER_EPS * r * r
    near_p = np.abs(pts - 1.0) < 1e-9
    uncovered = ~(in_cov | in_dj | near_p)
    n_unc = int(np.count_nonzero(uncovered))
    rows.append(CheckRow("grid_coverage", n_unc == 0, float(n_unc),
                         f"{pts.size} finite samples + infinity"))

    # (2) boundary curves.  Circle samples (not in the open exterior) must
    # lie inside the covering domain; curve samples must lie outside the
    # closed disc -- both strictly except near the parabolic point.
    t = np.linspace(0.0, 1.0, boundary_samples) ** 2 * 1.0e3
    lx = 1.0 + 0.5 * t
    ly = np.sqrt(3.0 * (t + 0.25 * t * t))
    excl = 1e-3 * max(r, 1.0)
    gap_all = np.empty(0)
    min_margin_lp = math.inf
    for sign in (1.0, -1.0):
        lp = lx + 1j * sign * ly
        gap = np.abs(np.abs(lp - x0) - r)
        gap_all = np.concatenate([gap_all, gap])
        far = np.abs(lp - 1.0) > excl
        if far.any():
            min_margin_lp = min(min_margin_lp, float(np.min(np.abs(lp[far] - x0) - r)))
    rows.append(CheckRow("curve_outside_disc", min_margin_lp > -_COVER_EPS * r,
                         min_margin_lp, f"min over samples beyond {excl:.1e} of the parabolic point"))

    psi = 2.0 * math.pi * np.arange(boundary_samples) / boundary_samples
    circ = (x0 + r * np.cos(psi)) + 1j * (r * np.sin(psi))
    cfar = np.abs(circ - 1.0) > excl
    ch = circ.real ** 2 - circ.imag ** 2 / 3.0
    min_margin_circ = float(np.min(ch[cfar] - 1.0)) if cfar.any() else math.inf
    circ_ok = (min_margin_circ > -_COVER_EPS * 10.0) and bool(np.all(circ.real[cfar] > 0.0))
    rows.append(CheckRow("circle_inside_covering_domain", circ_ok, min_margin_circ,
                         "hyperbola margin of disc-boundary samples"))

    # (3) closest approach of the curves happens at the parabolic point.
    lp_pts = np.concatenate([lx + 1j * ly, lx - 1j * ly])
    argmin = int(np.argmin(gap_all))
    at_p = bool(abs(lp_pts[argmin] - 1.0) <= excl)
    rows.append(CheckRow("closest_approach_at_parabolic_point", at_p,
                         float(gap_all[argmin]),
                         f"attained at Z = {lp_pts[argmin]:.6g}"))

    # (4) transversality of the parabolic axis.
    margin = Parameter(s.a).transversality_margin
    tangent = margin <= margin_threshold
    rows.append(CheckRow("transversality_margin", not tangent, margin,
                         f"threshold {margin_threshold:.1e}"))

    passed = all(row.passed for row in rows)
    return KleinReport(a=s.a, passed=passed, tangent_regime=tangent,
                       transversality_margin=margin, rows=tuple(rows))
