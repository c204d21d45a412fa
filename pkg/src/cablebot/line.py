"""Catenary geometry for a span of overhead cable between equal-height supports.

The cable hangs as y(x) = H - sag + a*(cosh((x - span/2)/a) - 1) where the
catenary parameter a satisfies a*(cosh(span/(2a)) - 1) = sag.  All positions
along the cable are addressed either by horizontal coordinate x in [0, span]
or by arclength s in [0, total_arclength] measured from the left support.
Units are meters and radians throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

# Sag-to-span ratios below this are treated as a perfectly straight segment.
_STRAIGHT_RATIO = 1e-9
# Bisection stops once the sag residual is this small (meters).
_RESIDUAL_TOL = 1e-12


class InvalidGeometryError(ValueError):
    """Raised for non-finite or out-of-range span/sag/support inputs."""


class OutOfDomainError(ValueError):
    """Raised when a queried x or s lies outside the cable."""


@dataclass(frozen=True)
class LineProfile:
    """Solved cable geometry.

    catenary_param is math.inf for the degenerate straight segment.
    """

    span: float
    sag: float
    catenary_param: float
    support_height: float
    total_arclength: float

    @property
    def is_straight(self) -> bool:
        return math.isinf(self.catenary_param)


def solve_catenary(span: float, sag: float, support_height: float) -> LineProfile:
    """Solve for the catenary parameter and build a LineProfile.

    The root of f(a) = a*(cosh(span/(2a)) - 1) - sag is bracketed by
    [span/1000, 1e6*span] and found by bisection; f is strictly decreasing
    in a, so the bracket is widened upward in the rare case a very small
    sag pushes the root past the nominal upper end.
    """
    for name, val in (("span", span), ("sag", sag), ("support_height", support_height)):
        if not math.isfinite(val):
            raise InvalidGeometryError(f"{name} must be finite, got {val!r}")
    if span <= 0:
        raise InvalidGeometryError(f"span must be positive, got {span!r}")
    if sag < 0:
        raise InvalidGeometryError(f"sag must be non-negative, got {sag!r}")
    if sag > span / 4:
        raise InvalidGeometryError(
            f"sag {sag!r} exceeds span/4 = {span / 4!r}; geometry out of supported range"
        )

    if sag < _STRAIGHT_RATIO * span:
        return LineProfile(
            span=span,
            sag=sag,
            catenary_param=math.inf,
            support_height=support_height,
            total_arclength=span,
        )

    def f(a: float) -> float:
        return a * (math.cosh(span / (2.0 * a)) - 1.0) - sag

    lo = span / 1000.0
    hi = 1e6 * span
    # Shallow-sag limit: a ~ span^2/(8*sag).  f(span^2/(4*sag)) ~ sag/2 - sag < 0.
    if f(hi) > 0.0:
        hi = span * span / (4.0 * sag)
    if f(lo) < 0.0:
        raise InvalidGeometryError(
            f"no catenary parameter in bracket for span={span!r}, sag={sag!r}"
        )
    a = 0.5 * (lo + hi)
    for _ in range(200):
        r = f(a)
        if abs(r) < _RESIDUAL_TOL:
            break
        if r > 0.0:
            lo = a
        else:
            hi = a
        a = 0.5 * (lo + hi)

    total = 2.0 * a * math.sinh(span / (2.0 * a))
    return LineProfile(
        span=span,
        sag=sag,
        catenary_param=a,
        support_height=support_height,
        total_arclength=total,
    )


def height_at(profile: LineProfile, x: float) -> float:
    """Cable height above ground at horizontal position x in [0, span]."""
    if not math.isfinite(x):
        raise OutOfDomainError(f"x must be finite, got {x!r}")
    if x < 0.0 or x > profile.span:
        raise OutOfDomainError(f"x={x!r} outside [0, {profile.span!r}]")
    if profile.is_straight:
        return profile.support_height
    a = profile.catenary_param
    u = (x - profile.span / 2.0) / a
    return profile.support_height - profile.sag + a * (math.cosh(u) - 1.0)


def arclength(profile: LineProfile) -> float:
    """Total cable length between the supports."""
    return profile.total_arclength


def x_at_arclength(profile: LineProfile, s: float) -> float:
    """Horizontal position of the point s meters along the cable.

    Inverts s(x) = a*sinh((x - span/2)/a) + total/2 analytically; the
    inverse hyperbolic form is exact, well inside the 1e-9 m tolerance
    a numeric inversion would be held to.
    """
    _check_s(profile, s)
    if profile.is_straight:
        return s
    a = profile.catenary_param
    x = profile.span / 2.0 + a * math.asinh((s - profile.total_arclength / 2.0) / a)
    # Guard the support endpoints against last-ulp rounding.
    return min(max(x, 0.0), profile.span)


def slope_at(profile: LineProfile, s: float) -> float:
    """Slope angle (radians) of the cable at arclength s.

    Equals atan(dy/dx) at x(s); by the sinh arclength identity this is
    atan((s - total/2)/a).  Negative while descending toward the lowest
    point, positive on the ascending half.
    """
    _check_s(profile, s)
    if profile.is_straight:
        return 0.0
    a = profile.catenary_param
    return math.atan((s - profile.total_arclength / 2.0) / a)


def height_at_arclength(profile: LineProfile, s: float) -> float:
    """Cable height at the point s meters along the cable."""
    return height_at(profile, x_at_arclength(profile, s))


def _check_s(profile: LineProfile, s: float) -> None:
    if not math.isfinite(s):
        raise OutOfDomainError(f"s must be finite, got {s!r}")
    if s < 0.0 or s > profile.total_arclength:
        raise OutOfDomainError(
            f"s={s!r} outside [0, {profile.total_arclength!r}]"
        )
