"""Discrete PID speed controller with output clamping and anti-windup.

The control law is the textbook positional form evaluated at a fixed period:
rectangular integration of the error, backward-difference derivative, and a
hard clamp of both the output and the integral state.  The derivative is
defined as zero on the first call after construction or reset, since no
previous error exists yet.

State is immutable; pid_step returns the output together with the advanced
state so a caller can replay or fork control sequences freely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class PidState:
    kp: float = 30.0
    ki: float = 1.0
    kd: float = 0.1
    out_min: float = -1.0
    out_max: float = 1.0
    integral: float = 0.0
    prev_error: float = 0.0
    initialized: bool = False

    def __post_init__(self) -> None:
        for name in ("kp", "ki", "kd"):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {val!r}")
        if not (math.isfinite(self.out_min) and math.isfinite(self.out_max)):
            raise ValueError("output limits must be finite")
        if self.out_min >= self.out_max:
            raise ValueError(
                f"out_min must be below out_max, got [{self.out_min!r}, {self.out_max!r}]"
            )


def _clamp_integral(integral: float, pid: PidState) -> float:
    # Keep ki*integral inside the output range so the integral term alone
    # can never pin the output against a limit (clamping anti-windup).
    if pid.ki > 0.0:
        return min(max(integral, pid.out_min / pid.ki), pid.out_max / pid.ki)
    return integral


def pid_step(
    pid: PidState, setpoint: float, measured: float, dt: float
) -> tuple[float, PidState]:
    """Advance one control period; returns (output, new state).

    A non-finite measurement or setpoint is a sensor fault: the output is
    forced to 0 and the state is left untouched.
    """
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be finite and positive, got {dt!r}")
    if not (math.isfinite(measured) and math.isfinite(setpoint)):
        return 0.0, pid

    error = setpoint - measured
    integral = _clamp_integral(pid.integral + error * dt, pid)
    if pid.initialized:
        derivative = (error - pid.prev_error) / dt
    else:
        derivative = 0.0
    raw = pid.kp * error + pid.ki * integral + pid.kd * derivative
    output = min(max(raw, pid.out_min), pid.out_max)
    return output, replace(pid, integral=integral, prev_error=error, initialized=True)


def reset(pid: PidState) -> PidState:
    """Clear integral and derivative history; gains and limits stay."""
    return replace(pid, integral=0.0, prev_error=0.0, initialized=False)


def set_gains(pid: PidState, kp: float, ki: float, kd: float) -> PidState:
    """Replace gains, keeping accumulated state (bumpless retune).

    Rejects negative or non-finite gains.  The integral is re-clamped
    against the new ki so the anti-windup bound holds immediately.
    """
    for name, val in (("kp", kp), ("ki", ki), ("kd", kd)):
        if not math.isfinite(val) or val < 0.0:
            raise ValueError(f"{name} must be finite and non-negative, got {val!r}")
    retuned = replace(pid, kp=kp, ki=ki, kd=kd)
    return replace(retuned, integral=_clamp_integral(retuned.integral, retuned))
