"""Model definition: parameters, the Kraus pair, initial data, angle parsing.

The walk is driven by two real 2x2 matrices parameterized by angles
(theta0, theta1) with c_j = cos(theta_j), s_j = sin(theta_j):

    P = [[0,     c0   ],        Q = [[s0*c1, s0*s1],
         [s0*s1, -s0*c1]]            [c0,    0    ]]

P moves the walker one site to the left, Q one site to the right, and
P^T P + Q^T Q = I makes the update trace preserving.  The walker starts at
the origin with internal state diag(p, 1-p).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfRangeError, ParseError

TAU = 2.0 * math.pi

_DECIMAL_RE = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_PI_RE = re.compile(r"(?:(?P<a>[+-]?\d+)\*)?pi(?:/(?P<b>[+-]?\d+))?")
ARCSIN_TOKEN = "arcsin(c0/s0)"


@dataclass(frozen=True)
class WalkParameters:
    """Angles, mixing weight, and their cached sines/cosines."""

    theta0: float
    theta1: float
    p: float = 0.5
    c0: float = field(init=False)
    s0: float = field(init=False)
    c1: float = field(init=False)
    s1: float = field(init=False)

    def __post_init__(self) -> None:
        for name in ("theta0", "theta1", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "c0", math.cos(self.theta0))
        object.__setattr__(self, "s0", math.sin(self.theta0))
        object.__setattr__(self, "c1", math.cos(self.theta1))
        object.__setattr__(self, "s1", math.sin(self.theta1))


@dataclass(frozen=True)
class KrausPair:
    """The two real jump matrices; P shifts left, Q shifts right."""

    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self) -> None:
        for m in (self.P, self.Q):
            m.flags.writeable = False


def build_kraus(params: WalkParameters) -> KrausPair:
    """Kraus pair for the given parameters (entries are always real)."""
    c0, s0, c1, s1 = params.c0, params.s0, params.c1, params.s1
    p_op = np.array([[0.0, c0], [s0 * s1, -s0 * c1]])
    q_op = np.array([[s0 * c1, s0 * s1], [c0, 0.0]])
    return KrausPair(P=p_op, Q=q_op)


def initial_state_vector(params: WalkParameters) -> np.ndarray:
    """Initial internal state (p, 1-p, 0, 0) in the rearranged vector order."""
    return np.array([params.p, 1.0 - params.p, 0.0, 0.0], dtype=complex)


def reduce_angle(value: float) -> float:
    """Reduce a radian value into [0, 2*pi)."""
    r = math.fmod(value, TAU)
    if r < 0.0:
        r += TAU
    return r


def parse_angle(text: str, theta0: float | None = None) -> float:
    """Parse an angle string and reduce it into [0, 2*pi).

    Accepted forms:

    * a decimal literal, e.g. ``"0.75"`` or ``"1e-3"``;
    * rational multiples of pi: ``"a*pi/b"``, ``"pi/b"``, ``"a*pi"``, ``"pi"``
      with integer a, b (b = 0 raises ZeroDivisionError);
    * the token ``"arcsin(c0/s0)"``, resolved against ``theta0`` (which must
      be supplied) via :func:`ballistic_theta1`.
    """
    s = text.strip()
    if s == ARCSIN_TOKEN:
        if theta0 is None:
            raise ParseError(
                f"'{ARCSIN_TOKEN}' can only be used for theta1, after theta0 is known"
            )
        return ballistic_theta1(theta0)
    m = _PI_RE.fullmatch(s)
    if m is not None:
        a = int(m.group("a")) if m.group("a") is not None else 1
        b = int(m.group("b")) if m.group("b") is not None else 1
        if b == 0:
            raise ZeroDivisionError(f"zero denominator in angle '{text}'")
        if b < 0:
            a, b = -a, -b
        # reduce the rational first so huge multiples of pi stay exact
        return math.pi * (a % (2 * b)) / b
    if _DECIMAL_RE.fullmatch(s):
        return reduce_angle(float(s))
    raise ParseError(f"cannot parse angle '{text}'")


def format_angle(value: float) -> str:
    """Shortest decimal form that parses back to exactly the same angle."""
    return repr(reduce_angle(value))


def ballistic_theta1(theta0: float) -> float:
    """Principal solution of sin(theta1) = cos(theta0)/sin(theta0) in [0, 2*pi).

    This is the theta1 for which c0 = s0*s1 holds exactly, i.e. the principal
    branch of the curve on which the walk spreads ballistically (when
    additionally cos(theta1) != 0).

    Raises
    ------
    ZeroDivisionError
        If sin(theta0) == 0.
    OutOfRangeError
        If |cos(theta0)/sin(theta0)| > 1; valid theta0 intervals are
        [pi/4, 3*pi/4] and [5*pi/4, 7*pi/4].
    """
    s0 = math.sin(theta0)
    if s0 == 0.0:
        raise ZeroDivisionError("sin(theta0) is zero; arcsin(c0/s0) undefined")
    ratio = math.cos(theta0) / s0
    if abs(ratio) > 1.0 + 1e-12:
        raise OutOfRangeError(
            f"|cos(theta0)/sin(theta0)| = {abs(ratio):.6g} > 1; "
            "no such theta1 exists (theta0 must lie in [pi/4, 3*pi/4] "
            "or [5*pi/4, 7*pi/4])"
        )
    # rounding can push the boundary ratio a few ulp past 1
    ratio = min(1.0, max(-1.0, ratio))
    return reduce_angle(math.asin(ratio))
