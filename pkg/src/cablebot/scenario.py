"""Scenario configuration: YAML schema, defaults, and validation.

A scenario file is a YAML document with the sections below; every key is
optional except sim.seed and sim.duration_s, and unknown keys are rejected
by name so typos cannot silently fall back to defaults.

    description: free text shown by `cablebot scenarios list`
    line:     span_m, sag_m, support_height_m, cable_diameter_mm
    vehicle:  mass_kg, wheel_radius_m, viscous_coeff, rolling_resist_coeff,
              spring_preload_n, friction_coeff
    motor:    supply_voltage_v, torque_constant, back_emf_constant,
              winding_resistance_ohm, gear_ratio, gear_efficiency
    encoder:  cpr, gear_ratio, wheel_circumference_m
    imu:      angle_noise_deg, accel_noise, sway_amplitude_deg,
              sway_frequency_hz, sway_decay_rate, attitude_bound_deg
    control:  kp, ki, kd, setpoint_mps, period_s
    link:     drop_prob, latency_s, telemetry_decimation
    sim:      duration_s, physics_dt_s, seed
    initial:  s_m, v_mps
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import yaml

from cablebot.dynamics import MotorParams, VehicleParams
from cablebot.line import LineProfile, solve_catenary
from cablebot.sensing import EncoderSpec, ImuParams


class ConfigError(ValueError):
    """Raised for unknown keys, missing required keys, or bad values."""


@dataclass(frozen=True)
class LineSettings:
    span_m: float = 10.0
    sag_m: float = 0.5
    support_height_m: float = 6.0
    cable_diameter_mm: float = 25.0


@dataclass(frozen=True)
class ControlSettings:
    kp: float = 30.0
    ki: float = 1.0
    kd: float = 0.1
    setpoint_mps: float = 0.2
    period_s: float = 0.02


@dataclass(frozen=True)
class LinkSettings:
    drop_prob: float = 0.0
    latency_s: float = 0.0
    telemetry_decimation: int = 1


@dataclass(frozen=True)
class SimSettings:
    duration_s: float
    seed: int
    physics_dt_s: float = 0.001


@dataclass(frozen=True)
class InitialSettings:
    s_m: float = 0.0
    v_mps: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    sim: SimSettings
    description: str = ""
    line: LineSettings = LineSettings()
    vehicle: VehicleParams = VehicleParams()
    motor: MotorParams = MotorParams()
    encoder: EncoderSpec = EncoderSpec()
    imu: ImuParams = ImuParams()
    control: ControlSettings = ControlSettings()
    link: LinkSettings = LinkSettings()
    initial: InitialSettings = InitialSettings()

    def profile(self) -> LineProfile:
        return solve_catenary(
            span=self.line.span_m,
            sag=self.line.sag_m,
            support_height=self.line.support_height_m,
        )

    @property
    def steps_per_control(self) -> int:
        return round(self.control.period_s / self.sim.physics_dt_s)

    @property
    def control_steps(self) -> int:
        return round(self.sim.duration_s / self.control.period_s)

    def with_overrides(self, seed: int | None = None, duration_s: float | None = None):
        sim = self.sim
        if seed is not None:
            sim = replace(sim, seed=seed)
        if duration_s is not None:
            sim = replace(sim, duration_s=duration_s)
        cfg = replace(self, sim=sim)
        _validate(cfg)
        return cfg


# (yaml key, attribute, type) per section; type "num" accepts int or float
_SCHEMA = {
    "line": [
        ("span_m", "span_m", "num"),
        ("sag_m", "sag_m", "num"),
        ("support_height_m", "support_height_m", "num"),
        ("cable_diameter_mm", "cable_diameter_mm", "num"),
    ],
    "vehicle": [
        ("mass_kg", "mass", "num"),
        ("wheel_radius_m", "wheel_radius", "num"),
        ("viscous_coeff", "viscous_coeff", "num"),
        ("rolling_resist_coeff", "rolling_resist_coeff", "num"),
        ("spring_preload_n", "spring_preload", "num"),
        ("friction_coeff", "friction_coeff", "num"),
    ],
    "motor": [
        ("supply_voltage_v", "supply_voltage", "num"),
        ("torque_constant", "torque_constant", "num"),
        ("back_emf_constant", "back_emf_constant", "num"),
        ("winding_resistance_ohm", "winding_resistance", "num"),
        ("gear_ratio", "gear_ratio", "num"),
        ("gear_efficiency", "gear_efficiency", "num"),
    ],
    "encoder": [
        ("cpr", "counts_per_rev", "int"),
        ("gear_ratio", "gear_ratio", "num"),
        ("wheel_circumference_m", "wheel_circumference", "num"),
    ],
    "imu": [
        ("angle_noise_deg", "angle_noise_deg", "num"),
        ("accel_noise", "accel_noise", "num"),
        ("sway_amplitude_deg", "sway_amplitude_deg", "num"),
        ("sway_frequency_hz", "sway_frequency_hz", "num"),
        ("sway_decay_rate", "sway_decay_rate", "num"),
        ("attitude_bound_deg", "attitude_bound_deg", "num"),
    ],
    "control": [
        ("kp", "kp", "num"),
        ("ki", "ki", "num"),
        ("kd", "kd", "num"),
        ("setpoint_mps", "setpoint_mps", "num"),
        ("period_s", "period_s", "num"),
    ],
    "link": [
        ("drop_prob", "drop_prob", "num"),
        ("latency_s", "latency_s", "num"),
        ("telemetry_decimation", "telemetry_decimation", "int"),
    ],
    "sim": [
        ("duration_s", "duration_s", "num"),
        ("physics_dt_s", "physics_dt_s", "num"),
        ("seed", "seed", "int"),
    ],
    "initial": [
        ("s_m", "s_m", "num"),
        ("v_mps", "v_mps", "num"),
    ],
}

_SECTION_TYPES = {
    "line": LineSettings,
    "vehicle": VehicleParams,
    "motor": MotorParams,
    "encoder": EncoderSpec,
    "imu": ImuParams,
    "control": ControlSettings,
    "link": LinkSettings,
    "sim": SimSettings,
    "initial": InitialSettings,
}


def _coerce(path: str, value, kind: str):
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key {path} must be an integer, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"key {path} must be a number, got {value!r}")
    return float(value)


def build_config(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"scenario document must be a mapping, got {type(raw).__name__}")
    known_sections = set(_SCHEMA) | {"description"}
    for key in raw:
        if key not in known_sections:
            raise ConfigError(f"unknown key: {key}")

    description = raw.get("description", "")
    if not isinstance(description, str):
        raise ConfigError(f"key description must be a string, got {description!r}")

    sections: dict[str, object] = {}
    for section, fields in _SCHEMA.items():
        given = raw.get(section, {})
        if given is None:
            given = {}
        if not isinstance(given, dict):
            raise ConfigError(f"section {section} must be a mapping, got {given!r}")
        allowed = {yaml_key for yaml_key, _, _ in fields}
        for key in given:
            if key not in allowed:
                raise ConfigError(f"unknown key: {section}.{key}")
        kwargs = {}
        for yaml_key, attr, kind in fields:
            if yaml_key in given:
                kwargs[attr] = _coerce(f"{section}.{yaml_key}", given[yaml_key], kind)
        if section == "sim":
            if "duration_s" not in kwargs:
                raise ConfigError("missing required key: sim.duration_s")
            if "seed" not in kwargs:
                raise ConfigError("missing required key: sim.seed")
        try:
            sections[section] = _SECTION_TYPES[section](**kwargs)
        except ValueError as exc:
            raise ConfigError(f"section {section}: {exc}") from None

    cfg = ScenarioConfig(description=description, **sections)  # type: ignore[arg-type]
    _validate(cfg)
    return cfg


def _validate(cfg: ScenarioConfig) -> None:
    sim, ctl = cfg.sim, cfg.control
    if not math.isfinite(sim.duration_s) or sim.duration_s <= 0:
        raise ConfigError(f"sim.duration_s must be positive, got {sim.duration_s!r}")
    if not math.isfinite(sim.physics_dt_s) or sim.physics_dt_s <= 0:
        raise ConfigError(f"sim.physics_dt_s must be positive, got {sim.physics_dt_s!r}")
    if not math.isfinite(ctl.period_s) or ctl.period_s <= 0:
        raise ConfigError(f"control.period_s must be positive, got {ctl.period_s!r}")
    ratio = ctl.period_s / sim.physics_dt_s
    if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
        raise ConfigError(
            f"control.period_s ({ctl.period_s!r}) must be an exact multiple of "
            f"sim.physics_dt_s ({sim.physics_dt_s!r})"
        )
    for name, val in (("kp", ctl.kp), ("ki", ctl.ki), ("kd", ctl.kd)):
        if not math.isfinite(val) or val < 0:
            raise ConfigError(f"control.{name} must be finite and non-negative, got {val!r}")
    if not math.isfinite(ctl.setpoint_mps):
        raise ConfigError(f"control.setpoint_mps must be finite, got {ctl.setpoint_mps!r}")
    if not 0.0 <= cfg.link.drop_prob <= 1.0:
        raise ConfigError(f"link.drop_prob must lie in [0, 1], got {cfg.link.drop_prob!r}")
    if not math.isfinite(cfg.link.latency_s) or cfg.link.latency_s < 0:
        raise ConfigError(f"link.latency_s must be non-negative, got {cfg.link.latency_s!r}")
    if cfg.link.telemetry_decimation < 1:
        raise ConfigError(
            f"link.telemetry_decimation must be >= 1, got {cfg.link.telemetry_decimation!r}"
        )
    profile = cfg.profile()  # raises InvalidGeometryError -> wrapped below by callers
    if not 0.0 <= cfg.initial.s_m <= profile.total_arclength:
        raise ConfigError(
            f"initial.s_m must lie on the line [0, {profile.total_arclength!r}], "
            f"got {cfg.initial.s_m!r}"
        )
    if not math.isfinite(cfg.initial.v_mps):
        raise ConfigError(f"initial.v_mps must be finite, got {cfg.initial.v_mps!r}")


def load_config(path: str | Path) -> ScenarioConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if raw is None:
        raise ConfigError(f"empty scenario file: {path}")
    return build_config(raw)


def shipped_scenarios() -> dict[str, str]:
    """Names and descriptions of the scenario files bundled with the package."""
    out = {}
    root = resources.files("cablebot") / "scenarios"
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".yaml"):
            raw = yaml.safe_load(entry.read_text(encoding="utf-8"))
            out[entry.name[: -len(".yaml")]] = raw.get("description", "")
    return out


def scenario_path(name: str) -> Path:
    """Resolve a shipped scenario by bare name (no extension)."""
    entry = resources.files("cablebot") / "scenarios" / f"{name}.yaml"
    if not entry.is_file():
        known = ", ".join(sorted(shipped_scenarios()))
        raise ConfigError(f"unknown scenario {name!r}; shipped scenarios: {known}")
    return Path(str(entry))
