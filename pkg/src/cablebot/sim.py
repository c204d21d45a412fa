"""Closed-loop simulation engine.

One control step covers [t_k, t_k + T) with t_k = k*T:

  1. deliver command frames whose link latency has elapsed and apply them
  2. sample the encoder over the window that just ended and estimate speed
  3. sample the IMU
  4. run the speed controller (or hold zero duty while an e-stop is latched)
  5. record a trace row for t_k
  6. emit a telemetry frame (subject to decimation and the lossy downlink)
  7. advance the physics by T/physics_dt substeps with the duty held

The engine is deterministic for a given config: all randomness comes from
named substreams of the scenario seed, and time is indexed by integer step
counts so pacing or I/O cannot perturb results.
"""
from __future__ import annotations

import math
import queue as queue_mod
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Protocol

from cablebot.control import PidState, pid_step, reset, set_gains
from cablebot.dynamics import RobotState, grip_margin, step as physics_step
from cablebot.line import slope_at
from cablebot.scenario import ScenarioConfig
from cablebot.seeding import substream, substream_seed
from cablebot.sensing import encoder_sample, estimate_velocity, imu_sample
from cablebot.telemetry import (
    Frame,
    FrameType,
    LossyLink,
    pack_ack,
    pack_telemetry,
    unpack_gains,
    unpack_setpoint,
)

CSV_HEADER = (
    "t_s,s_m,v_true_mps,v_est_mps,setpoint_mps,duty,slope_deg,"
    "roll_deg,pitch_deg,yaw_deg,encoder_count,grip_margin"
)


@dataclass(slots=True)
class TraceRecord:
    t_s: float
    s_m: float
    v_true_mps: float
    v_est_mps: float
    setpoint_mps: float
    duty: float
    slope_deg: float
    roll_deg: float
    pitch_deg: float
    yaw_deg: float
    encoder_count: int
    grip_margin: float


@dataclass
class Trace:
    records: list[TraceRecord]

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.records]


class CommandSource(Protocol):
    def poll(self, t: float) -> list[Frame]:
        """Frames that have arrived at the robot's radio by sim time t."""
        ...


class ScriptedSource:
    """Replays (time, frame) pairs; each frame arrives at the first control
    step whose time is >= its scheduled time."""

    def __init__(self, schedule: Iterable[tuple[float, Frame]]):
        self._pending = sorted(schedule, key=lambda item: item[0])

    def poll(self, t: float) -> list[Frame]:
        out = []
        while self._pending and self._pending[0][0] <= t + 1e-12:
            out.append(self._pending.pop(0)[1])
        return out


class QueueSource:
    """Thread-safe source fed by a bridge; poll drains whatever is queued."""

    def __init__(self, queue: "queue_mod.Queue[Frame]"):
        self._queue = queue

    def poll(self, t: float) -> list[Frame]:
        out = []
        while True:
            try:
                out.append(self._queue.get_nowait())
            except queue_mod.Empty:
                return out


class SimulationEngine:
    def __init__(
        self,
        config: ScenarioConfig,
        command_source: CommandSource | None = None,
        frame_sink: Callable[[Frame], None] | None = None,
    ):
        self.config = config
        self.profile = config.profile()
        self.commands = command_source
        self.frame_sink = frame_sink

        seed = config.sim.seed
        self._imu_rng = substream(seed, "imu")
        self._cmd_link = LossyLink(
            drop_prob=config.link.drop_prob,
            latency=config.link.latency_s,
            seed=substream_seed(seed, "link.cmd"),
        )
        self._tlm_link = LossyLink(
            drop_prob=config.link.drop_prob,
            latency=config.link.latency_s,
            seed=substream_seed(seed, "link.tlm"),
        )

        ctl = config.control
        self._pid = PidState(kp=ctl.kp, ki=ctl.ki, kd=ctl.kd)
        self._setpoint = ctl.setpoint_mps
        self._estop = False
        self._duty = 0.0

        init = config.initial
        self.state = RobotState(
            s=init.s_m,
            v=init.v_mps,
            omega=init.v_mps / config.vehicle.wheel_radius,
            t=0.0,
        )
        self._prev_wheel_angle = self.state.s / config.vehicle.wheel_radius
        self._prev_v = self.state.v
        self._encoder_count = 0
        self._tlm_seq = 0
        self.dropped_commands = 0  # frames that are not commands at all

    # -- command handling --------------------------------------------------

    def _ack(self, t: float, acked_seq: int, status: int) -> None:
        frame = Frame(FrameType.ACK, self._next_seq(), pack_ack(acked_seq, status))
        self._offer_downlink(frame, t)

    def _next_seq(self) -> int:
        seq = self._tlm_seq
        self._tlm_seq = (self._tlm_seq + 1) % 256
        return seq

    def _offer_downlink(self, frame: Frame, t: float) -> None:
        self._tlm_link.offer(frame, now=t)

    def _apply_command(self, frame: Frame, t: float) -> None:
        if frame.frame_type == FrameType.SET_SETPOINT:
            self._setpoint = unpack_setpoint(frame.payload) / 1000.0
            self._estop = False
            self._ack(t, frame.seq, 0)
        elif frame.frame_type == FrameType.SET_GAINS:
            kp_m, ki_m, kd_m = unpack_gains(frame.payload)
            try:
                self._pid = set_gains(
                    self._pid, kp=kp_m / 1000.0, ki=ki_m / 1000.0, kd=kd_m / 1000.0
                )
            except ValueError:
                self._ack(t, frame.seq, 1)
            else:
                self._ack(t, frame.seq, 0)
        elif frame.frame_type == FrameType.ESTOP:
            self._estop = True
            self._setpoint = 0.0
            self._pid = reset(self._pid)
            self._ack(t, frame.seq, 0)
        else:
            self.dropped_commands += 1

    # -- main loop ----------------------------------------------------------

    def run_step(self, k: int) -> TraceRecord:
        cfg = self.config
        t = k * cfg.control.period_s
        period = cfg.control.period_s

        if self.commands is not None:
            for frame in self.commands.poll(t):
                self._cmd_link.offer(frame, now=t)
        for frame in self._cmd_link.deliver(now=t):
            self._apply_command(frame, t)

        wheel_angle = self.state.s / cfg.vehicle.wheel_radius
        if k == 0:
            reading = encoder_sample(wheel_angle, wheel_angle, cfg.encoder, period)
        else:
            reading = encoder_sample(wheel_angle, self._prev_wheel_angle, cfg.encoder, period)
        self._prev_wheel_angle = wheel_angle
        self._encoder_count += reading.count_delta
        v_est = estimate_velocity(reading, cfg.encoder)

        accel_along = 0.0 if k == 0 else (self.state.v - self._prev_v) / period
        self._prev_v = self.state.v
        imu = imu_sample(self.state, self.profile, cfg.imu, self._imu_rng, accel_along)

        if self._estop:
            self._duty = 0.0
        else:
            self._duty, self._pid = pid_step(self._pid, self._setpoint, v_est, period)

        slope_deg = math.degrees(slope_at(self.profile, self.state.s))
        record = TraceRecord(
            t_s=t,
            s_m=self.state.s,
            v_true_mps=self.state.v,
            v_est_mps=v_est,
            setpoint_mps=self._setpoint,
            duty=self._duty,
            slope_deg=slope_deg,
            roll_deg=imu.roll_deg,
            pitch_deg=imu.pitch_deg,
            yaw_deg=imu.yaw_deg,
            encoder_count=self._encoder_count,
            grip_margin=grip_margin(self.state, self.profile, cfg.vehicle),
        )

        if k % cfg.link.telemetry_decimation == 0:
            payload = pack_telemetry(
                t_ms=round(t * 1000),
                v_mm_s=round(v_est * 1000),
                duty_pm=round(self._duty * 1000),
                roll_cd=round(imu.roll_deg * 100),
                pitch_cd=round(imu.pitch_deg * 100),
                yaw_cd=round(imu.yaw_deg * 100),
                encoder=self._encoder_count,
            )
            self._offer_downlink(Frame(FrameType.TELEMETRY, self._next_seq(), payload), t)
        if self.frame_sink is not None:
            for frame in self._tlm_link.deliver(now=t):
                self.frame_sink(frame)

        for _ in range(cfg.steps_per_control):
            self.state = physics_step(
                self.state,
                self._duty,
                self.profile,
                cfg.vehicle,
                cfg.motor,
                cfg.sim.physics_dt_s,
            )
        return record

    def run(self) -> Trace:
        records = [self.run_step(k) for k in range(self.config.control_steps)]
        return Trace(records)


def run_scenario(
    config: ScenarioConfig,
    schedule: Iterable[tuple[float, Frame]] | None = None,
) -> Trace:
    source = ScriptedSource(schedule) if schedule is not None else None
    return SimulationEngine(config, command_source=source).run()


# -- CSV serialization ------------------------------------------------------

_COLUMNS = CSV_HEADER.split(",")


def _fmt(value) -> str:
    return format(value, ".6g")


def write_csv(trace: Trace, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in trace.records:
            fh.write(",".join(_fmt(getattr(r, col)) for col in _COLUMNS) + "\n")


def read_csv(path: str | Path) -> Trace:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        records = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            if len(parts) != len(_COLUMNS):
                raise ValueError(f"malformed CSV row: {line!r}")
            values = dict(zip(_COLUMNS, (float(p) for p in parts)))
            values["encoder_count"] = int(round(values["encoder_count"]))
            records.append(TraceRecord(**values))
    return Trace(records)
