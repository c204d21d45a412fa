"""Runs a scenario with live TCP/WebSocket endpoints attached.

The simulation itself stays deterministic: network clients only inject
command frames into a queue that the loop drains at control-step boundaries,
and pacing sleeps never feed back into the physics. `pace` scales sim time
to wall time (1.0 = real time, 2.0 = twice real time, 0 = no pacing, useful
for tests).
"""
from __future__ import annotations

import threading
import time
from typing import Callable

from cablebot.scenario import ScenarioConfig
from cablebot.sim import QueueSource, SimulationEngine, Trace
from cablebot.telemetry.bridge import TelemetryBridge


def serve_scenario(
    config: ScenarioConfig,
    host: str = "127.0.0.1",
    tcp_port: int = 0,
    ws_port: int = 0,
    pace: float = 1.0,
    stop_event: threading.Event | None = None,
    on_ready: Callable[[TelemetryBridge], None] | None = None,
) -> Trace:
    if pace < 0:
        raise ValueError(f"pace must be >= 0, got {pace!r}")
    bridge = TelemetryBridge(host=host, tcp_port=tcp_port, ws_port=ws_port)
    bridge.start()
    engine = SimulationEngine(
        config,
        command_source=QueueSource(bridge.command_queue),
        frame_sink=bridge.publish,
    )
    records = []
    try:
        if on_ready is not None:
            on_ready(bridge)
        start = time.monotonic()
        for k in range(config.control_steps):
            if stop_event is not None and stop_event.is_set():
                break
            records.append(engine.run_step(k))
            if pace > 0:
                target = start + (k + 1) * config.control.period_s / pace
                delay = target - time.monotonic()
                if delay > 0:
                    time.sleep(delay)
    finally:
        bridge.close()
    return Trace(records)
