"""Simulator and control stack for a single-wheel cable inspection robot."""

from cablebot.line import (
    InvalidGeometryError,
    LineProfile,
    OutOfDomainError,
    arclength,
    height_at,
    height_at_arclength,
    slope_at,
    solve_catenary,
    x_at_arclength,
)

__all__ = [
    "InvalidGeometryError",
    "LineProfile",
    "OutOfDomainError",
    "arclength",
    "height_at",
    "height_at_arclength",
    "slope_at",
    "solve_catenary",
    "x_at_arclength",
]
