"""Orbit iteration and escape-time classification of the restricted branch.

Membership of a point in the backward limit set is equivalent to its
forward orbit under the single-valued restricted branch never leaving the
closed exterior of the domain disc; exit is permanent, so escape at any
step is a certificate.  The forward limit set is handled by conjugating
with the involution.  This module is the pure reference implementation --
the bulk per-pixel engines in ``_kernels_*`` reproduce its verdicts bit
for bit -- and also hosts the Newton periodic-point search and numerical
Fatou (Abel) coordinates at the parabolic point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from . import _scalar
from .correspondence import (
    INFINITY,
    SingularDerivativeError,
    SpherePoint,
    _aval,
    _dec,
    _enc,
    parabolic_jet,
)
from .domains import StandardDomains


class PetalExitError(RuntimeError):
    """Inverse orbit left the repelling petal (moduli stopped shrinking)."""


class Verdict(Enum):
    ESCAPED = "escaped"
    BOUNDED = "bounded"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class Classification:
    """Escape-time verdict: Escaped(step) / Bounded(after) / Ambiguous(step)."""

    verdict: Verdict
    step: int
    last_point: SpherePoint

    @property
    def escaped(self) -> bool:
        return self.verdict is Verdict.ESCAPED

    @property
    def bounded(self) -> bool:
        return self.verdict is Verdict.BOUNDED


class StepKind(Enum):
    NEXT = "next"
    ESCAPE = "escape"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class StepResult:
    kind: StepKind
    point: SpherePoint | None = None
    candidates: tuple[SpherePoint, SpherePoint] | None = None


@dataclass(frozen=True)
class PeriodicPoint:
    point: SpherePoint
    period: int
    multiplier: complex
    residual: float

    @property
    def is_repelling(self) -> bool:
        return abs(self.multiplier) > 1.0


def _setup(a, s: StandardDomains):
    a = _aval(a)
    jc = _scalar.j_coefficients(a)
    return a, jc, s.center, s.radius_sq_slack


def forward_branch_step(a, s: StandardDomains, Z) -> StepResult:
    """One application of the restricted branch.

    Exactly one image inside the closed exterior -> Next; none -> Escape;
    both -> Ambiguous, except that coinciding images (collided branches,
    e.g. at the preimage of the parabolic point) count as a single one.
    """
    _, jc, x0, r2s = _setup(a, s)
    z = _enc(SpherePoint.of(Z))
    c1, c2 = _scalar.step_candidates(jc, z)
    d1 = _scalar.dj_depth(x0, c1)
    d2 = _scalar.dj_depth(x0, c2)
    nxt, n = _scalar.choose_inner(c1, c2, d1, d2, r2s)
    if n == 0:
        return StepResult(StepKind.ESCAPE, candidates=(_dec(c1), _dec(c2)))
    if n == 2 and c1 != c2:
        return StepResult(StepKind.AMBIGUOUS, point=_dec(nxt), candidates=(_dec(c1), _dec(c2)))
    return StepResult(StepKind.NEXT, point=_dec(nxt), candidates=(_dec(c1), _dec(c2)))


def classify_backward(a, s: StandardDomains, Z, max_iter: int = 2000,
                      policy: str = "inner") -> Classification:
    """Approximate membership of Z in the backward limit set.

    Bounded(max_iter) when the restricted orbit stays in the closed
    exterior for max_iter steps; Escaped(n) certifies non-membership.
    ``policy='strict'`` surfaces genuinely two-valued steps as Ambiguous
    instead of resolving them toward the deeper candidate.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if policy not in ("inner", "strict"):
        raise ValueError(f"unknown ambiguity policy {policy!r}")
    _, jc, x0, r2s = _setup(a, s)
    z = _enc(SpherePoint.of(Z))
    if _scalar.dj_depth(x0, z) < r2s:
        return Classification(Verdict.ESCAPED, 0, _dec(z))
    last = z
    for k in range(1, max_iter + 1):
        c1, c2 = _scalar.step_candidates(jc, last)
        d1 = _scalar.dj_depth(x0, c1)
        d2 = _scalar.dj_depth(x0, c2)
        nxt, n = _scalar.choose_inner(c1, c2, d1, d2, r2s)
        if n == 0:
            return Classification(Verdict.ESCAPED, k, _dec(last))
        if n == 2 and policy == "strict" and c1 != c2:
            return Classification(Verdict.AMBIGUOUS, k, _dec(last))
        last = nxt
    return Classification(Verdict.BOUNDED, max_iter, _dec(last))


def classify_forward(a, s: StandardDomains, Z, max_iter: int = 2000,
                     policy: str = "inner") -> Classification:
    """Approximate membership in the forward limit set: classify the
    involuted point backward."""
    a = _aval(a)
    jc = _scalar.j_coefficients(a)
    z = _scalar.moebius_apply(jc, _enc(SpherePoint.of(Z)), True)
    return classify_backward(a, s, _dec(z), max_iter, policy)


def critical_value(a) -> SpherePoint:
    """The free critical value 2/(3-a) whose orbit probes connectedness."""
    a = _aval(a)
    den = 3.0 - a
    if den == 0.0:
        return INFINITY
    v = 2.0 / den
    if abs(v.real) > _scalar.INF_LIMIT or abs(v.imag) > _scalar.INF_LIMIT:
        return INFINITY
    return SpherePoint(v)


def critical_orbit_classify(a, s: StandardDomains, max_iter: int = 10000,
                            policy: str = "inner") -> Classification:
    """Escape-time verdict for the free critical orbit.

    A bounded verdict is the numerical proxy for the parameter belonging
    to the modular Mandelbrot set (connected backward limit set).
    """
    return classify_backward(a, s, critical_value(a), max_iter, policy)


@dataclass(frozen=True)
class TraceRow:
    step: int
    point: SpherePoint
    n_inside: int


def orbit_trace(a, s: StandardDomains, Z, max_iter: int = 100) -> list[TraceRow]:
    """Restricted-branch orbit with per-step membership counts, for export."""
    _, jc, x0, r2s = _setup(a, s)
    z = _enc(SpherePoint.of(Z))
    rows = [TraceRow(0, _dec(z), 1 if _scalar.dj_depth(x0, z) >= r2s else 0)]
    if rows[0].n_inside == 0:
        return rows
    for k in range(1, max_iter + 1):
        c1, c2 = _scalar.step_candidates(jc, z)
        d1 = _scalar.dj_depth(x0, c1)
        d2 = _scalar.dj_depth(x0, c2)
        z, n = _scalar.choose_inner(c1, c2, d1, d2, r2s)
        rows.append(TraceRow(k, _dec(z if n else None), n))
        if n == 0:
            break
    return rows


def format_trace(rows: list[TraceRow]) -> str:
    out = ["step re im inside"]
    for r in rows:
        if r.point.infinite and r.n_inside == 0:
            out.append(f"{r.step} escaped escaped 0")
        elif r.point.infinite:
            out.append(f"{r.step} inf inf {r.n_inside}")
        else:
            v = r.point.value
            out.append(f"{r.step} {v.real!r} {v.imag!r} {r.n_inside}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# periodic points

def _branch_orbit(a, jc, x0, r2s, z: complex, period: int):
    """Evaluate the p-fold restricted branch with its derivative.

    Outside the closed exterior the deeper candidate is followed anyway
    (analytic continuation for Newton); returns None on infinity or a
    singular derivative factor.
    """
    deriv = complex(1.0, 0.0)
    orbit = [z]
    w = z
    for _ in range(period):
        w1, w2 = _scalar.cov_candidates(w)
        c1 = _scalar.moebius_apply(jc, w1, True)
        c2 = _scalar.moebius_apply(jc, w2, True)
        d1 = _scalar.dj_depth(x0, c1)
        d2 = _scalar.dj_depth(x0, c2)
        nxt, n = _scalar.choose_inner(c1, c2, d1, d2, r2s)
        if n == 0:
            nxt = c1 if d1 >= d2 else c2
        if nxt is None:
            return None
        wsel = w1 if nxt == c1 else w2
        den_cov = w + 2.0 * wsel
        den_j = 2.0 * wsel - (a + 1.0)
        if den_cov == 0.0 or den_j == 0.0:
            return None
        jprime = -((a - 1.0) ** 2) / (den_j * den_j)
        deriv *= jprime * (-(2.0 * w + wsel) / den_cov)
        w = nxt
        orbit.append(w)
    return w, deriv, orbit


def default_seeds(s: StandardDomains, center: complex = 1.0 + 0j,
                  width: float = 8.0, n: int = 64) -> list[SpherePoint]:
    """Grid of Newton seeds over a viewport, kept to the closed exterior."""
    seeds = []
    r2 = s.radius * s.radius
    for j in range(n):
        for i in range(n):
            z = complex(center.real + (i - (n - 1) / 2.0) * width / n,
                        center.imag + (j - (n - 1) / 2.0) * width / n)
            dx = z.real - s.center
            if dx * dx + z.imag * z.imag >= r2:
                seeds.append(SpherePoint(z))
    return seeds


def find_periodic(a, s: StandardDomains, period: int,
                  seeds: list[SpherePoint] | None = None,
                  newton_steps: int = 64, residual_tol: float = 1e-9,
                  merge_tol: float = 1e-6) -> list[PeriodicPoint]:
    """Newton search for periodic points of the restricted branch.

    Converged points are reduced to their minimal period, required to keep
    the whole cycle inside the closed exterior, and de-duplicated; the
    multiplier is the product of branch derivatives along the cycle.
    Non-convergent or singular seeds are discarded.
    """
    if period < 1:
        raise ValueError("period must be >= 1")
    a, jc, x0, r2s = _setup(a, s)
    if seeds is None:
        seeds = default_seeds(s)
    found: list[PeriodicPoint] = []
    known_cycles: list[list[complex]] = []
    member_r2 = (s.radius * s.radius) * (1.0 - 1e-9)
    for seed in seeds:
        sp = SpherePoint.of(seed)
        if sp.infinite:
            continue
        z = sp.value
        for _ in range(newton_steps):
            ev = _branch_orbit(a, jc, x0, r2s, z, period)
            if ev is None:
                break
            fz, deriv, _ = ev
            g = fz - z
            if abs(g) < 1e-12 * max(1.0, abs(z)):
                break
            dg = deriv - 1.0
            if abs(dg) < 1e-14 or not (abs(z) < 1e9):
                break
            z = z - g / dg
        ev = _branch_orbit(a, jc, x0, r2s, z, period)
        if ev is None:
            continue
        fz, _, orbit = ev
        residual = abs(fz - z)
        if residual > residual_tol:
            continue
        if not all(_scalar.dj_depth(x0, w) >= member_r2 for w in orbit[:period]):
            continue
        minp = period
        for q in range(1, period):
            if period % q == 0 and abs(orbit[q] - z) < merge_tol:
                minp = q
                break
        evq = _branch_orbit(a, jc, x0, r2s, z, minp)
        if evq is None:
            continue
        mult = evq[1]
        cycle = orbit[:minp]
        if any(any(abs(p - w) < merge_tol for p in cycle for w in old)
               for old in known_cycles):
            continue
        known_cycles.append(cycle)
        rep = min(cycle, key=lambda w: (w.real, w.imag))
        found.append(PeriodicPoint(SpherePoint(rep), minp, mult, residual))
    found.sort(key=lambda p: (p.period, p.point.value.real, p.point.value.imag))
    return found


def multiplier_along_cycle(a, s: StandardDomains, z, period: int) -> complex:
    """Product of branch derivatives along the restricted orbit of z."""
    a, jc, x0, r2s = _setup(a, s)
    ev = _branch_orbit(a, jc, x0, r2s, SpherePoint.of(z).value, period)
    if ev is None:
        raise SingularDerivativeError("singular step along the cycle")
    return ev[1]


# ---------------------------------------------------------------------------
# Fatou coordinate at the parabolic point

def inverse_branch_fixed(a, zeta: complex) -> complex:
    """Inverse branch fixing the parabolic point, in the local coordinate
    zeta = Z - 1."""
    a = _aval(a)
    jc = _scalar.j_coefficients(a)
    y = _scalar.moebius_apply(jc, 1.0 + zeta, False)
    if y is None:
        raise ValueError("inverse branch hit the involution pole")
    return _scalar.cov_candidates(y)[0] - 1.0


def _inverse_orbit(a, zeta: complex, n: int) -> complex:
    m_prev = abs(zeta)
    grow = 0
    z = zeta
    for _ in range(n):
        z = inverse_branch_fixed(a, z)
        m = abs(z)
        if m >= m_prev:
            grow += 1
            if grow >= 3:
                raise PetalExitError("inverse orbit is not shrinking: outside the repelling petal")
        else:
            grow = 0
        m_prev = m
    return z


def fatou_repelling(a, zeta, n: int = 200) -> complex:
    """First-order repelling Fatou coordinate after n inverse steps:
    ``1/(-b * g^{-n}(zeta)) + n`` with b the quadratic jet coefficient.

    Only the Abel-equation residual is guaranteed (the chart is normalised
    up to an asymptotically-identity factor).  Requires a nonzero
    quadratic coefficient (a != 7) and a point in the repelling petal.
    """
    a = _aval(a)
    if n < 1:
        raise ValueError("n must be >= 1")
    b = parabolic_jet(a).c2
    if b == 0.0:
        raise ValueError("vanishing quadratic coefficient at a = 7: no single repelling axis")
    z = SpherePoint.of(zeta)
    if z.infinite:
        raise ValueError("petal point must be finite")
    zn = _inverse_orbit(a, z.value, n)
    return 1.0 / (-b * zn) + n


def fatou_abel_residual(a, zeta, n: int = 200) -> float:
    """|Phi_n(g^{-1}(zeta)) - (Phi_n(zeta) - 1)|, the Abel-equation defect."""
    a = _aval(a)
    z = SpherePoint.of(zeta).value
    return abs(fatou_repelling(a, inverse_branch_fixed(a, z), n) - (fatou_repelling(a, z, n) - 1.0))
