"""Sensor models: quadrature encoder on the motor shaft and a strapdown IMU.

The encoder quantizes the absolute wheel angle to whole counts with floor(),
so fractional counts simply carry over to the next sampling window and no
count is ever created or lost across window boundaries.  Velocity is then
estimated from the count delta over a fixed window:

    v = count_delta * wheel_circumference / (counts_per_rev * gear_ratio * dt)

The IMU reports pitch from the local cable slope while roll and yaw follow a
damped sinusoidal sway that settles as the drive stabilizes; all channels
carry additive Gaussian noise drawn from a caller-supplied random stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random

from cablebot.dynamics import GRAVITY, RobotState
from cablebot.line import LineProfile, slope_at

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class EncoderSpec:
    """counts_per_rev is measured at the motor shaft, before the reduction."""

    counts_per_rev: int = 48
    gear_ratio: float = 34.0
    wheel_circumference: float = 2.0 * math.pi * 0.035

    def __post_init__(self) -> None:
        if self.counts_per_rev <= 0:
            raise ValueError(f"counts_per_rev must be positive, got {self.counts_per_rev!r}")
        if not math.isfinite(self.gear_ratio) or self.gear_ratio <= 0:
            raise ValueError(f"gear_ratio must be positive, got {self.gear_ratio!r}")
        if not math.isfinite(self.wheel_circumference) or self.wheel_circumference <= 0:
            raise ValueError(
                f"wheel_circumference must be positive, got {self.wheel_circumference!r}"
            )

    @property
    def counts_per_wheel_rev(self) -> float:
        return self.counts_per_rev * self.gear_ratio


@dataclass(frozen=True)
class EncoderReading:
    count_delta: int
    cumulative: int
    dt: float


def count_at(wheel_angle: float, spec: EncoderSpec) -> int:
    """Cumulative encoder count at an absolute wheel angle (radians)."""
    if not math.isfinite(wheel_angle):
        raise ValueError(f"wheel_angle must be finite, got {wheel_angle!r}")
    return math.floor(wheel_angle / _TWO_PI * spec.counts_per_wheel_rev)


def encoder_sample(
    angle_now: float, angle_prev: float, spec: EncoderSpec, dt: float
) -> EncoderReading:
    """Counts accumulated between two absolute wheel angles over dt seconds."""
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be finite and positive, got {dt!r}")
    now = count_at(angle_now, spec)
    prev = count_at(angle_prev, spec)
    return EncoderReading(count_delta=now - prev, cumulative=now, dt=dt)


def estimate_velocity(reading: EncoderReading, spec: EncoderSpec) -> float:
    """Windowed velocity estimate from the count delta."""
    return (
        reading.count_delta
        * spec.wheel_circumference
        / (spec.counts_per_rev * spec.gear_ratio * reading.dt)
    )


def velocity_resolution(spec: EncoderSpec, dt: float) -> float:
    """Size of one count in m/s at window dt: the quantization error bound."""
    return spec.wheel_circumference / (spec.counts_per_rev * spec.gear_ratio * dt)


@dataclass(frozen=True)
class ImuParams:
    """Noise magnitudes and the sway model for roll/yaw.

    Roll and yaw swing as amplitude * exp(-decay * t) * sin(2*pi*f*t + phase)
    and the reported values are clamped to +/- attitude_bound_deg; the bound
    is a declared property of the mount, not an emergent one.
    """

    angle_noise_deg: float = 0.5
    accel_noise: float = 0.05
    sway_amplitude_deg: float = 8.0
    sway_frequency_hz: float = 0.5
    sway_decay_rate: float = 0.05
    yaw_phase_rad: float = math.pi / 2.0
    attitude_bound_deg: float = 10.0

    def __post_init__(self) -> None:
        for name in (
            "angle_noise_deg",
            "accel_noise",
            "sway_amplitude_deg",
            "sway_frequency_hz",
            "sway_decay_rate",
            "attitude_bound_deg",
        ):
            val = getattr(self, name)
            if not math.isfinite(val) or val < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {val!r}")


@dataclass(frozen=True)
class ImuReading:
    roll_deg: float
    pitch_deg: float
    yaw_deg: float
    accel: tuple[float, float, float]


def imu_sample(
    state: RobotState,
    profile: LineProfile,
    params: ImuParams,
    rng: Random,
    accel_along: float = 0.0,
) -> ImuReading:
    """One IMU reading at the current state.

    Draw order from rng is fixed (pitch, roll, yaw, ax, ay, az) so a given
    stream position always produces the same reading.
    """
    theta = slope_at(profile, state.s)
    bound = params.attitude_bound_deg

    envelope = params.sway_amplitude_deg * math.exp(-params.sway_decay_rate * state.t)
    phase = _TWO_PI * params.sway_frequency_hz * state.t
    sway_roll = envelope * math.sin(phase)
    sway_yaw = envelope * math.sin(phase + params.yaw_phase_rad)

    pitch = math.degrees(theta) + rng.gauss(0.0, params.angle_noise_deg)
    roll = sway_roll + rng.gauss(0.0, params.angle_noise_deg)
    yaw = sway_yaw + rng.gauss(0.0, params.angle_noise_deg)
    roll = min(max(roll, -bound), bound)
    yaw = min(max(yaw, -bound), bound)

    ax = accel_along + GRAVITY * math.sin(theta) + rng.gauss(0.0, params.accel_noise)
    ay = rng.gauss(0.0, params.accel_noise)
    az = GRAVITY * math.cos(theta) + rng.gauss(0.0, params.accel_noise)

    return ImuReading(roll_deg=roll, pitch_deg=pitch, yaw_deg=yaw, accel=(ax, ay, az))
