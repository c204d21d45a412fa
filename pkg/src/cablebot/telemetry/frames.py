"""Binary frame codec for the radio downlink/uplink.

Wire layout, all multi-byte fields big-endian:

    0x7E | length:u16 | type:u8 | seq:u8 | payload | crc16:u16

length counts type+seq+payload (2 + payload size).  The CRC is
CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection, no final xor)
over type|seq|payload.  There is no byte stuffing: a receiver that
loses sync scans forward for the next 0x7E and relies on the CRC to
reject false delimiters.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import IntEnum

DELIMITER = 0x7E
_MAX_PAYLOAD = 64  # generous cap; the largest defined payload is 18 bytes


class FrameType(IntEnum):
    TELEMETRY = 0x01
    SET_SETPOINT = 0x02
    SET_GAINS = 0x03
    ACK = 0x04
    ESTOP = 0x05


PAYLOAD_SIZES = {
    FrameType.TELEMETRY: 18,
    FrameType.SET_SETPOINT: 2,
    FrameType.SET_GAINS: 12,
    FrameType.ACK: 2,
    FrameType.ESTOP: 0,
}

_TELEMETRY_STRUCT = struct.Struct(">Ihhhhhi")
_SETPOINT_STRUCT = struct.Struct(">h")
_GAINS_STRUCT = struct.Struct(">iii")
_ACK_STRUCT = struct.Struct(">BB")


class FrameEncodeError(ValueError):
    """Raised for unknown types, bad seq, or payload size mismatches."""


class FrameDecodeError(ValueError):
    """Raised when a payload cannot be unpacked as its declared type."""


@dataclass(frozen=True)
class Frame:
    frame_type: FrameType
    seq: int
    payload: bytes = b""


def crc16(data: bytes) -> int:
    """CRC-16/CCITT-FALSE; crc16(b"123456789") == 0x29B1."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte << 8
        for _ in range(8):
            if crc & 0x8000:
                crc = ((crc << 1) ^ 0x1021) & 0xFFFF
            else:
                crc = (crc << 1) & 0xFFFF
    return crc


def encode_frame(frame: Frame) -> bytes:
    try:
        ftype = FrameType(frame.frame_type)
    except ValueError:
        raise FrameEncodeError(f"unknown frame type {frame.frame_type!r}") from None
    if not 0 <= frame.seq <= 255:
        raise FrameEncodeError(f"seq must be one byte, got {frame.seq!r}")
    expected = PAYLOAD_SIZES[ftype]
    if len(frame.payload) != expected:
        raise FrameEncodeError(
            f"{ftype.name} payload must be {expected} bytes, got {len(frame.payload)}"
        )
    body = bytes([ftype, frame.seq]) + frame.payload
    return (
        bytes([DELIMITER])
        + struct.pack(">H", len(body))
        + body
        + struct.pack(">H", crc16(body))
    )


def decode_stream(buffer: bytes) -> tuple[list[Frame], bytes, int]:
    """Extract all complete frames from a byte stream.

    Returns (frames, remainder, error_count).  The remainder is any
    trailing bytes that could still become a frame once more data
    arrives; prepend it to the next chunk.  error_count tallies CRC
    failures, invalid lengths and malformed-but-CRC-valid frames.
    Feeding the stream in arbitrary chunks yields the same frames and
    error total as one call over the concatenation.
    """
    frames: list[Frame] = []
    errors = 0
    pos = 0
    n = len(buffer)
    while True:
        start = buffer.find(DELIMITER, pos)
        if start < 0:
            return frames, b"", errors
        if n - start < 3:
            return frames, bytes(buffer[start:]), errors
        length = (buffer[start + 1] << 8) | buffer[start + 2]
        if length < 2 or length > 2 + _MAX_PAYLOAD:
            errors += 1
            pos = start + 1
            continue
        end = start + 3 + length + 2
        if n < end:
            return frames, bytes(buffer[start:]), errors
        body = buffer[start + 3 : start + 3 + length]
        received = (buffer[end - 2] << 8) | buffer[end - 1]
        if crc16(body) != received:
            errors += 1
            pos = start + 1
            continue
        try:
            ftype = FrameType(body[0])
        except ValueError:
            errors += 1  # CRC-valid but unknown type: skip the whole frame
            pos = end
            continue
        if len(body) - 2 != PAYLOAD_SIZES[ftype]:
            errors += 1
            pos = end
            continue
        frames.append(Frame(frame_type=ftype, seq=body[1], payload=bytes(body[2:])))
        pos = end


# ---------------- payload packing ----------------

def _saturate(value: int, lo: int, hi: int) -> int:
    return min(max(int(value), lo), hi)


def pack_telemetry(
    t_ms: int,
    v_mm_s: int,
    duty_pm: int,
    roll_cd: int,
    pitch_cd: int,
    yaw_cd: int,
    encoder: int,
) -> bytes:
    """Telemetry payload; i16 fields saturate at their integer range."""
    return _TELEMETRY_STRUCT.pack(
        t_ms & 0xFFFFFFFF,
        _saturate(v_mm_s, -32768, 32767),
        _saturate(duty_pm, -32768, 32767),
        _saturate(roll_cd, -32768, 32767),
        _saturate(pitch_cd, -32768, 32767),
        _saturate(yaw_cd, -32768, 32767),
        _saturate(encoder, -(2**31), 2**31 - 1),
    )


def unpack_telemetry(payload: bytes) -> tuple[int, int, int, int, int, int, int]:
    try:
        return _TELEMETRY_STRUCT.unpack(payload)
    except struct.error as exc:
        raise FrameDecodeError(f"bad telemetry payload: {exc}") from None


def pack_setpoint(v_mm_s: int) -> bytes:
    if not -32768 <= int(v_mm_s) <= 32767:
        raise FrameEncodeError(f"setpoint {v_mm_s!r} mm/s outside i16 range")
    return _SETPOINT_STRUCT.pack(int(v_mm_s))


def unpack_setpoint(payload: bytes) -> int:
    try:
        return _SETPOINT_STRUCT.unpack(payload)[0]
    except struct.error as exc:
        raise FrameDecodeError(f"bad setpoint payload: {exc}") from None


def pack_gains(kp_milli: int, ki_milli: int, kd_milli: int) -> bytes:
    for name, val in (("kp", kp_milli), ("ki", ki_milli), ("kd", kd_milli)):
        if not -(2**31) <= int(val) <= 2**31 - 1:
            raise FrameEncodeError(f"{name} {val!r} outside i32 range")
    return _GAINS_STRUCT.pack(int(kp_milli), int(ki_milli), int(kd_milli))


def unpack_gains(payload: bytes) -> tuple[int, int, int]:
    try:
        return _GAINS_STRUCT.unpack(payload)
    except struct.error as exc:
        raise FrameDecodeError(f"bad gains payload: {exc}") from None


def pack_ack(acked_seq: int, status: int) -> bytes:
    return _ACK_STRUCT.pack(acked_seq & 0xFF, status & 0xFF)


def unpack_ack(payload: bytes) -> tuple[int, int]:
    try:
        return _ACK_STRUCT.unpack(payload)
    except struct.error as exc:
        raise FrameDecodeError(f"bad ack payload: {exc}") from None
