"""Parameter-case analysis: closed-form moments, limits, and the classifier.

The long-time behaviour of the walk splits on the manifold c0 = s0*s1:

* on the manifold with c1 != 0 the spread is ballistic, sigma(X_t)/t
  converging to s0^2 |c1| sqrt(1 + 3 s1^2 - (2p-1)^2 c1^2);
* on the manifold with c1 = 0, sigma(X_t)/sqrt(t) converges to 1;
* off the manifold the spread is diffusive with
  sigma(X_t)/sqrt(t) -> |s0| sqrt(c1^2 + 4 c0^2 s1^2
  + 4 c0 s0 s1 (c1^2 - 2 c0^2 s1^2)) / |c0 - s0 s1|.

Off the manifold two slices admit exact or refined finite-t formulas: the
parity slice s0*c1 = 0 (moments alternate with the parity of t) and the
slice c0 = 0 (large-t asymptotics with explicit constants).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import NegativeRadicandError, WrongCaseError
from .simulate import MomentReport
from .walk import WalkParameters, ballistic_theta1, reduce_angle

_EPS_DEFAULT = 1e-12
_RADICAND_FLOOR = -1e-9


class PhaseKind(Enum):
    BALLISTIC = "ballistic"                # c0 = s0*s1, c1 != 0
    DIFFUSIVE_UNIT = "diffusive_unit"      # c0 = s0*s1, c1 = 0 (limit constant 1)
    DIFFUSIVE = "diffusive"                # c0 != s0*s1


class Subcase(Enum):
    S0C1_ZERO = "s0c1_zero"
    C0_ZERO = "c0_zero"
    GENERIC = "generic"
    NONE = "none"


@dataclass(frozen=True)
class PhaseClass:
    kind: PhaseKind
    subcase: Subcase

    def __post_init__(self) -> None:
        if self.kind is not PhaseKind.DIFFUSIVE and self.subcase is not Subcase.NONE:
            raise ValueError("subcase applies only to the diffusive kind")


@dataclass(frozen=True)
class PhaseReport:
    """Scaling law of sigma(X_t): exponent, limit constant, and flags."""

    phase: PhaseClass
    scaling_exponent: float
    limit_constant: float
    p: float
    bounded_motion: bool = False


def classify(params: WalkParameters, eps: float = _EPS_DEFAULT) -> PhaseClass:
    """Phase class of a parameter point, with tolerance eps on the manifold."""
    if eps <= 0.0:
        raise ValueError("eps must be > 0")
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    if abs(c0 - s0 * s1) <= eps:
        if abs(c1) > eps:
            return PhaseClass(PhaseKind.BALLISTIC, Subcase.NONE)
        return PhaseClass(PhaseKind.DIFFUSIVE_UNIT, Subcase.NONE)
    if abs(s0 * c1) <= eps:
        return PhaseClass(PhaseKind.DIFFUSIVE, Subcase.S0C1_ZERO)
    if abs(c0) <= eps:
        return PhaseClass(PhaseKind.DIFFUSIVE, Subcase.C0_ZERO)
    return PhaseClass(PhaseKind.DIFFUSIVE, Subcase.GENERIC)


def moments_case_a(params: WalkParameters, t: int, eps: float = _EPS_DEFAULT) -> MomentReport:
    """Exact moments on the manifold c0 = s0*s1, valid at every finite t.

    E(X_t)   = (2p-1) s0^2 c1^2 t
    E(X_t^2) = s0^4 c1^2 (1+3 s1^2) t^2 + s0^2 {1 + s1^2 - s0^2 c1^2 (1+3 s1^2)} t
    """
    phase = classify(params, eps)
    if phase.kind not in (PhaseKind.BALLISTIC, PhaseKind.DIFFUSIVE_UNIT):
        raise WrongCaseError("moments_case_a requires c0 = s0*s1")
    c1, s0, s1, p = params.c1, params.s0, params.s1, params.p
    s0c1sq = s0 * s0 * c1 * c1
    quad = s0c1sq * s0 * s0 * (1.0 + 3.0 * s1 * s1)
    e1 = (2.0 * p - 1.0) * s0c1sq * t
    e2 = quad * t * t + s0 * s0 * (1.0 + s1 * s1 - s0c1sq * (1.0 + 3.0 * s1 * s1)) * t
    return MomentReport.from_raw(t, e1, e2)


def moments_case_b(params: WalkParameters, t: int, eps: float = _EPS_DEFAULT) -> MomentReport:
    """Exact parity-alternating moments on the slice s0*c1 = 0, c0 != s0*s1.

    Even t:  E(X_t) = 0,                    E(X_t^2) = 4 c0^2 s0^2 t
    Odd t:   E(X_t) = (2p-1)(2 c0^2 - 1),   E(X_t^2) = 4 c0^2 s0^2 t + (2 c0^2 - 1)^2
    """
    phase = classify(params, eps)
    if not (phase.kind is PhaseKind.DIFFUSIVE and phase.subcase is Subcase.S0C1_ZERO):
        raise WrongCaseError("moments_case_b requires s0*c1 = 0 with c0 != s0*s1")
    c0, s0, p = params.c0, params.s0, params.p
    drift = 2.0 * c0 * c0 - 1.0
    e2 = 4.0 * c0 * c0 * s0 * s0 * t
    if t % 2 == 0:
        return MomentReport.from_raw(t, 0.0, e2)
    return MomentReport.from_raw(t, (2.0 * p - 1.0) * drift, e2 + drift * drift)


def moments_case_c_asymptotic(
    params: WalkParameters, eps: float = _EPS_DEFAULT
) -> tuple[float, float, float]:
    """Large-t constants on the slice c0 = 0: (e1 limit, e2 slope, e2 offset).

    E(X_t)   -> (2p-1)(1 - 2 s1^2) / (2 s1^2)
    E(X_t^2) ~  (c1^2/s1^2) t - (1 - 2 s1^2) / (2 s1^4)
    """
    phase = classify(params, eps)
    if not (phase.kind is PhaseKind.DIFFUSIVE and phase.subcase is Subcase.C0_ZERO):
        raise WrongCaseError("moments_case_c_asymptotic requires c0 = 0 with s0*c1 != 0")
    c1, s1, p = params.c1, params.s1, params.p
    s1sq = s1 * s1
    e1_limit = (2.0 * p - 1.0) * (1.0 - 2.0 * s1sq) / (2.0 * s1sq)
    e2_slope = c1 * c1 / s1sq
    e2_offset = -(1.0 - 2.0 * s1sq) / (2.0 * s1sq * s1sq)
    return e1_limit, e2_slope, e2_offset


def _diffusion_radicand(params: WalkParameters) -> float:
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    return (
        c1 * c1
        + 4.0 * c0 * c0 * s1 * s1
        + 4.0 * c0 * s0 * s1 * (c1 * c1 - 2.0 * c0 * c0 * s1 * s1)
    )


def diffusion_constant(params: WalkParameters, eps: float = _EPS_DEFAULT) -> float:
    """Limit of sigma(X_t)/sqrt(t) off the manifold c0 = s0*s1.

    Equals sqrt of minus the second k-derivative at k=0 of the eigenvalue
    branch through 1 (see spectral.perron_derivatives).
    """
    phase = classify(params, eps)
    if phase.kind is not PhaseKind.DIFFUSIVE:
        raise WrongCaseError("diffusion_constant requires c0 != s0*s1")
    rad = _diffusion_radicand(params)
    if rad < _RADICAND_FLOOR:
        raise NegativeRadicandError(
            f"variance-slope radicand {rad:.3e} is negative beyond tolerance"
        )
    rad = max(rad, 0.0)
    return abs(params.s0) * math.sqrt(rad) / abs(params.c0 - params.s0 * params.s1)


def ballistic_constant(params: WalkParameters, eps: float = _EPS_DEFAULT) -> float:
    """Limit of sigma(X_t)/t on the manifold c0 = s0*s1 with c1 != 0."""
    phase = classify(params, eps)
    if phase.kind is not PhaseKind.BALLISTIC:
        raise WrongCaseError("ballistic_constant requires c0 = s0*s1 and c1 != 0")
    c1, s0, s1, p = params.c1, params.s0, params.s1, params.p
    rad = 1.0 + 3.0 * s1 * s1 - (2.0 * p - 1.0) ** 2 * c1 * c1
    return s0 * s0 * abs(c1) * math.sqrt(max(rad, 0.0))


def sigma_limit(params: WalkParameters, eps: float = _EPS_DEFAULT) -> PhaseReport:
    """Scaling exponent and limit constant of the rescaled standard deviation.

    Ballistic points: (1, ballistic_constant); the c1 = 0 manifold points:
    (1/2, 1); every other point: (1/2, diffusion_constant).  A diffusive
    point whose constant vanishes (bounded motion) keeps the formula value 0
    and is flagged with ``bounded_motion``.
    """
    phase = classify(params, eps)
    if phase.kind is PhaseKind.BALLISTIC:
        return PhaseReport(phase, 1.0, ballistic_constant(params, eps), params.p)
    if phase.kind is PhaseKind.DIFFUSIVE_UNIT:
        return PhaseReport(phase, 0.5, 1.0, params.p)
    const = diffusion_constant(params, eps)
    return PhaseReport(phase, 0.5, const, params.p, bounded_motion=const <= 1e-12)


_BRANCH_FIRST = ((math.pi / 4, math.pi / 2), (5 * math.pi / 4, 3 * math.pi / 2))
_BRANCH_SECOND = ((math.pi / 2, 3 * math.pi / 4), (3 * math.pi / 2, 7 * math.pi / 4))


def ballistic_set(theta0: float, eps: float = _EPS_DEFAULT) -> list[float]:
    """All theta1 in [0, 2*pi) making (theta0, theta1) ballistic.

    Enumerates the arcsin branches of the manifold c0 = s0*s1:
    arcsin(c0/s0) and pi - arcsin(c0/s0) for theta0 in (pi/4, pi/2] or
    (5pi/4, 3pi/2]; pi - arcsin(c0/s0) and 2pi + arcsin(c0/s0) for theta0 in
    (pi/2, 3pi/4) or (3pi/2, 7pi/4).  Solutions with cos(theta1) = 0 are
    excluded (they scale diffusively).  Returned sorted ascending.
    """
    candidates: list[float] = []
    in_first = any(lo < theta0 <= hi for lo, hi in _BRANCH_FIRST)
    in_second = any(lo < theta0 < hi for lo, hi in _BRANCH_SECOND)
    if in_first or in_second:
        principal = ballistic_theta1(theta0)
        # ballistic_theta1 already wraps into [0, 2*pi); recover the signed arcsin
        asn = principal if principal <= math.pi else principal - 2.0 * math.pi
        if in_first:
            candidates.extend((reduce_angle(asn), reduce_angle(math.pi - asn)))
        if in_second:
            candidates.extend(
                (reduce_angle(math.pi - asn), reduce_angle(2.0 * math.pi + asn))
            )
    out: list[float] = []
    c0, s0 = math.cos(theta0), math.sin(theta0)
    for theta1 in candidates:
        if abs(math.cos(theta1)) <= eps:
            continue
        if abs(c0 - s0 * math.sin(theta1)) > 1e-12:
            raise AssertionError("branch value drifted off the manifold")
        if all(abs(theta1 - seen) > 1e-12 for seen in out):
            out.append(theta1)
    return sorted(out)


def closed_moment_columns(
    params: WalkParameters, t: int, eps: float = _EPS_DEFAULT
) -> tuple[float | None, float | None, float | None]:
    """(e1, e2, sigma) closed/asymptotic values for reporting, None if absent.

    Manifold points and the parity slice get their exact formulas; the
    c0 = 0 slice gets its large-t asymptotics; generic diffusive points get
    the asymptotic variance slope only (no closed drift exists there).
    """
    phase = classify(params, eps)
    if phase.kind in (PhaseKind.BALLISTIC, PhaseKind.DIFFUSIVE_UNIT):
        rep = moments_case_a(params, t, eps)
        return rep.e1, rep.e2, rep.sigma
    if phase.subcase is Subcase.S0C1_ZERO:
        rep = moments_case_b(params, t, eps)
        return rep.e1, rep.e2, rep.sigma
    if phase.subcase is Subcase.C0_ZERO:
        e1_limit, slope, offset = moments_case_c_asymptotic(params, eps)
        e2 = slope * t + offset
        sigma = math.sqrt(max(e2 - e1_limit * e1_limit, 0.0))
        return e1_limit, e2, sigma
    const = diffusion_constant(params, eps)
    return None, const * const * t, const * math.sqrt(t)
