from cablebot.telemetry.frames import (
    Frame,
    FrameDecodeError,
    FrameEncodeError,
    FrameType,
    crc16,
    decode_stream,
    encode_frame,
    pack_ack,
    pack_gains,
    pack_setpoint,
    pack_telemetry,
    unpack_ack,
    unpack_gains,
    unpack_setpoint,
    unpack_telemetry,
)
from cablebot.telemetry.link import LossyLink

__all__ = [
    "Frame",
    "FrameDecodeError",
    "FrameEncodeError",
    "FrameType",
    "LossyLink",
    "crc16",
    "decode_stream",
    "encode_frame",
    "pack_ack",
    "pack_gains",
    "pack_setpoint",
    "pack_telemetry",
    "unpack_ack",
    "unpack_gains",
    "unpack_setpoint",
    "unpack_telemetry",
]
