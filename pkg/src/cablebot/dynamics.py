"""Longitudinal dynamics of the robot riding the cable.

Quarter-vehicle model: a single driven wheel pressed onto the cable by a
spring-loaded clamp, moving along the arclength coordinate s of a
LineProfile.  The drive is a brushed DC motor behind a reduction gear;
wheel/cable slip is neglected, so wheel speed is always v/wheel_radius.

Integration is semi-implicit Euler at a fixed step: velocity first from
the force balance, then position from the new velocity.  The scheme is
symplectic for the conservative part, which keeps energy bounded on a
sagged span instead of drifting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from cablebot.line import LineProfile, slope_at

GRAVITY = 9.80665  # m/s^2

# Velocities inside this band count as standstill for rolling resistance,
# so the sign() term cannot chatter around v = 0.
STANDSTILL_BAND = 1e-3  # m/s

# Traction demands below this are treated as zero when forming grip margin.
_GRIP_EPS = 1e-9  # N


class NumericFault(RuntimeError):
    """Raised when a non-finite value enters or leaves an update."""


@dataclass(frozen=True)
class MotorParams:
    """Brushed DC motor and reduction gear constants.

    supply_voltage: bus voltage across the H-bridge, V
    torque_constant: motor torque per ampere, N*m/A
    back_emf_constant: EMF per motor shaft speed, V*s/rad
    winding_resistance: armature resistance, ohm
    gear_ratio: motor turns per wheel turn
    gear_efficiency: torque transmission efficiency, (0, 1]
    """

    supply_voltage: float = 12.0
    torque_constant: float = 0.01
    back_emf_constant: float = 0.01
    winding_resistance: float = 1.0
    gear_ratio: float = 34.0
    gear_efficiency: float = 0.85

    def __post_init__(self) -> None:
        for name in (
            "supply_voltage",
            "torque_constant",
            "back_emf_constant",
            "winding_resistance",
            "gear_ratio",
            "gear_efficiency",
        ):
            val = getattr(self, name)
            if not math.isfinite(val) or val <= 0.0:
                raise ValueError(f"{name} must be finite and positive, got {val!r}")
        if self.gear_efficiency > 1.0:
            raise ValueError(
                f"gear_efficiency must be in (0, 1], got {self.gear_efficiency!r}"
            )


@dataclass(frozen=True)
class VehicleParams:
    """Chassis, clamp and loss parameters.

    mass: kg; wheel_radius: m; viscous_coeff: N*s/m; rolling_resist_coeff:
    dimensionless against clamp normal force; spring_preload: N pressing the
    wheel onto the cable; friction_coeff: wheel/cable Coulomb limit.
    """

    mass: float = 2.0
    wheel_radius: float = 0.035
    viscous_coeff: float = 0.5
    rolling_resist_coeff: float = 0.01
    spring_preload: float = 15.0
    friction_coeff: float = 0.6

    def __post_init__(self) -> None:
        if not math.isfinite(self.mass) or self.mass <= 0.0:
            raise ValueError(f"mass must be finite and positive, got {self.mass!r}")
        if not math.isfinite(self.wheel_radius) or self.wheel_radius <= 0.0:
            raise ValueError(
                f"wheel_radius must be finite and positive, got {self.wheel_radius!r}"
            )
        for name in (
            "viscous_coeff",
            "rolling_resist_coeff",
            "spring_preload",
            "friction_coeff",
        ):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {val!r}")


@dataclass(frozen=True)
class RobotState:
    """Along-cable position s (m), speed v (m/s), wheel speed omega (rad/s), time t (s)."""

    s: float = 0.0
    v: float = 0.0
    omega: float = 0.0
    t: float = 0.0


def motor_torque(duty: float, omega_motor: float, motor: MotorParams) -> float:
    """Torque delivered at the wheel for a signed PWM duty in [-1, 1].

    Armature current is (duty*V - Ke*omega_motor)/R; negative results brake.
    """
    if not math.isfinite(duty) or abs(duty) > 1.0:
        raise ValueError(f"duty must lie in [-1, 1], got {duty!r}")
    if not math.isfinite(omega_motor):
        raise NumericFault(f"omega_motor is not finite: {omega_motor!r}")
    current = (duty * motor.supply_voltage - motor.back_emf_constant * omega_motor) / (
        motor.winding_resistance
    )
    return motor.gear_efficiency * motor.gear_ratio * motor.torque_constant * current


def _signum_banded(v: float) -> float:
    if v > STANDSTILL_BAND:
        return 1.0
    if v < -STANDSTILL_BAND:
        return -1.0
    return 0.0


def normal_force(state: RobotState, profile: LineProfile, params: VehicleParams) -> float:
    """Clamp force pressing the wheel onto the cable at the current position."""
    theta = slope_at(profile, state.s)
    return params.spring_preload + params.mass * GRAVITY * math.cos(theta)


def step(
    state: RobotState,
    duty: float,
    profile: LineProfile,
    params: VehicleParams,
    motor: MotorParams,
    dt: float,
) -> RobotState:
    """Advance the robot one fixed step of dt seconds under a held duty."""
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be finite and positive, got {dt!r}")
    if not (math.isfinite(state.s) and math.isfinite(state.v)):
        raise NumericFault(f"non-finite state: s={state.s!r} v={state.v!r}")

    theta = slope_at(profile, state.s)
    n_force = params.spring_preload + params.mass * GRAVITY * math.cos(theta)
    omega_motor = motor.gear_ratio * (state.v / params.wheel_radius)
    drive = motor_torque(duty, omega_motor, motor) / params.wheel_radius
    gravity = params.mass * GRAVITY * math.sin(theta)
    viscous = params.viscous_coeff * state.v
    rolling = params.rolling_resist_coeff * n_force * _signum_banded(state.v)

    accel = (drive - gravity - viscous - rolling) / params.mass
    v_new = state.v + accel * dt
    s_new = state.s + v_new * dt

    # The supports are hard stops: clamp position and kill velocity.
    if s_new <= 0.0:
        s_new = 0.0
        if v_new < 0.0:
            v_new = 0.0
    elif s_new >= profile.total_arclength:
        s_new = profile.total_arclength
        if v_new > 0.0:
            v_new = 0.0

    if not (math.isfinite(s_new) and math.isfinite(v_new)):
        raise NumericFault(f"update produced non-finite state: s={s_new!r} v={v_new!r}")

    return RobotState(
        s=s_new,
        v=v_new,
        omega=v_new / params.wheel_radius,
        t=state.t + dt,
    )


def grip_margin(state: RobotState, profile: LineProfile, params: VehicleParams) -> float:
    """Ratio of available Coulomb traction to the quasi-static traction demand.

    Demand is the force needed to sustain the current motion: gravity along
    the cable plus viscous and rolling drag.  Values above 1 mean the wheel
    holds; zero demand reports math.inf.
    """
    theta = slope_at(profile, state.s)
    n_force = params.spring_preload + params.mass * GRAVITY * math.cos(theta)
    available = params.friction_coeff * n_force
    demand = abs(
        params.mass * GRAVITY * math.sin(theta)
        + params.viscous_coeff * state.v
        + params.rolling_resist_coeff * n_force * _signum_banded(state.v)
    )
    if demand < _GRIP_EPS:
        return math.inf if available > 0.0 else 0.0
    return available / demand
