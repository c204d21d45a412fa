"""Seeded lossy-link model between the robot radio and the ground station.

Frames offered to the link are either dropped (independent Bernoulli trials
from a dedicated stream) or delivered after a fixed latency.  Delivery
order is FIFO; the link never reorders or duplicates.
"""
from __future__ import annotations

import math
from collections import deque
from random import Random

from cablebot.telemetry.frames import Frame


class LossyLink:
    def __init__(self, drop_prob: float = 0.0, latency: float = 0.0, seed: int = 0):
        if not 0.0 <= drop_prob <= 1.0:
            raise ValueError(f"drop_prob must lie in [0, 1], got {drop_prob!r}")
        if not math.isfinite(latency) or latency < 0.0:
            raise ValueError(f"latency must be finite and non-negative, got {latency!r}")
        self.drop_prob = drop_prob
        self.latency = latency
        self._rng = Random(seed)
        self._queue: deque[tuple[float, Frame]] = deque()
        self.offered = 0
        self.dropped = 0

    def offer(self, frame: Frame, now: float) -> None:
        """Submit a frame at simulation time now."""
        self.offered += 1
        if self.drop_prob > 0.0 and self._rng.random() < self.drop_prob:
            self.dropped += 1
            return
        self._queue.append((now + self.latency, frame))

    def deliver(self, now: float) -> list[Frame]:
        """Frames whose delivery time has arrived, oldest first."""
        out: list[Frame] = []
        while self._queue and self._queue[0][0] <= now:
            out.append(self._queue.popleft()[1])
        return out

    def pending(self) -> int:
        return len(self._queue)
