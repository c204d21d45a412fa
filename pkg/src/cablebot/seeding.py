"""Named random sub-streams derived from one scenario seed.

Every consumer of randomness (IMU noise, link loss, ...) gets its own
stream keyed by name, so adding or removing draws in one consumer can
never shift the values another consumer sees.
"""
from __future__ import annotations

import hashlib
from random import Random


def substream_seed(seed: int, name: str) -> int:
    digest = hashlib.sha256(f"{seed}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def substream(seed: int, name: str) -> Random:
    return Random(substream_seed(seed, name))
