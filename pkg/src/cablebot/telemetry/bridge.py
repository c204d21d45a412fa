"""Network bridge between the simulated robot and ground-station clients.

Two listeners run side by side:

  * a TCP server speaking the raw binary frame protocol in both directions,
    for clients that implement the framing themselves;
  * a WebSocket server speaking a JSON mapping of the same frames, for
    browser consoles.

Downlink frames (telemetry, acks) fan out to every connected client. Uplink
command frames from any client are queued for the simulation loop, which
applies them at its next control step. Each client gets its own bounded
outbound queue and writer thread, so one slow consumer only loses its own
frames and can never stall the simulation.

JSON mapping (all integers, wire units):

  out  {"type": "telemetry", "seq", "t_ms", "v_mm_s", "duty_pm",
        "roll_cd", "pitch_cd", "yaw_cd", "enc"}
  out  {"type": "ack", "seq", "acked_seq", "status"}
  in   {"type": "set_setpoint", "v_mm_s": int, "seq": optional int}
  in   {"type": "set_gains", "kp_m": int, "ki_m": int, "kd_m": int,
        "seq": optional int}
  in   {"type": "estop", "seq": optional int}

A malformed or unrecognized JSON command is answered immediately with an
ack of status 1 on the submitting connection; the simulation never sees it.
If the optional "seq" is omitted the bridge assigns one, and the ack echoes
it so the console can correlate.
"""
from __future__ import annotations

import json
import queue
import socket
import threading

from websockets.sync.server import serve as _ws_serve

from cablebot.telemetry.frames import (
    Frame,
    FrameType,
    decode_stream,
    encode_frame,
    pack_gains,
    pack_setpoint,
    unpack_ack,
    unpack_telemetry,
)

_OUTBOUND_QUEUE_SIZE = 512


def frame_to_json(frame: Frame) -> dict | None:
    """JSON-mapped form of a downlink frame, or None if it has no mapping."""
    if frame.frame_type == FrameType.TELEMETRY:
        t_ms, v_mm_s, duty_pm, roll_cd, pitch_cd, yaw_cd, enc = unpack_telemetry(
            frame.payload
        )
        return {
            "type": "telemetry",
            "seq": frame.seq,
            "t_ms": t_ms,
            "v_mm_s": v_mm_s,
            "duty_pm": duty_pm,
            "roll_cd": roll_cd,
            "pitch_cd": pitch_cd,
            "yaw_cd": yaw_cd,
            "enc": enc,
        }
    if frame.frame_type == FrameType.ACK:
        acked_seq, status = unpack_ack(frame.payload)
        return {"type": "ack", "seq": frame.seq, "acked_seq": acked_seq, "status": status}
    return None


def _require_int(msg: dict, key: str, lo: int, hi: int) -> int:
    value = msg.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"field {key} must be an integer")
    if not lo <= value <= hi:
        raise ValueError(f"field {key} out of range")
    return value


class TelemetryBridge:
    def __init__(self, host: str = "127.0.0.1", tcp_port: int = 0, ws_port: int = 0):
        self.host = host
        self._tcp_port_req = tcp_port
        self._ws_port_req = ws_port
        self.tcp_port = 0
        self.ws_port = 0
        self.command_queue: "queue.Queue[Frame]" = queue.Queue()
        self.decode_errors = 0
        self._clients_lock = threading.Lock()
        self._tcp_clients: list[_TcpClient] = []
        self._ws_clients: list[_WsClient] = []
        self._threads: list[threading.Thread] = []
        self._closing = threading.Event()
        self._listen_sock: socket.socket | None = None
        self._ws_server = None
        self._next_seq = 0
        self._seq_lock = threading.Lock()

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        sock = socket.create_server((self.host, self._tcp_port_req))
        sock.settimeout(0.2)
        self._listen_sock = sock
        self.tcp_port = sock.getsockname()[1]

        self._ws_server = _ws_serve(self._handle_ws, self.host, self._ws_port_req)
        self.ws_port = self._ws_server.socket.getsockname()[1]

        accept = threading.Thread(target=self._accept_loop, daemon=True)
        ws_thread = threading.Thread(target=self._ws_server.serve_forever, daemon=True)
        accept.start()
        ws_thread.start()
        self._threads += [accept, ws_thread]

    def close(self) -> None:
        self._closing.set()
        if self._ws_server is not None:
            self._ws_server.shutdown()
        if self._listen_sock is not None:
            self._listen_sock.close()
        with self._clients_lock:
            tcp, ws = list(self._tcp_clients), list(self._ws_clients)
        for client in tcp:
            client.close()
        for client in ws:
            client.close()
        for thread in self._threads:
            thread.join(timeout=2.0)

    # -- downlink fan-out ---------------------------------------------------

    def publish(self, frame: Frame) -> None:
        raw = encode_frame(frame)
        text = None
        mapped = frame_to_json(frame)
        if mapped is not None:
            text = json.dumps(mapped, separators=(",", ":"))
        with self._clients_lock:
            tcp, ws = list(self._tcp_clients), list(self._ws_clients)
        for client in tcp:
            client.offer(raw)
        if text is not None:
            for client in ws:
                client.offer(text)

    # -- uplink -------------------------------------------------------------

    def _assign_seq(self) -> int:
        with self._seq_lock:
            seq = self._next_seq
            self._next_seq = (self._next_seq + 1) % 256
        return seq

    def _json_to_frame(self, msg: dict) -> Frame:
        if not isinstance(msg, dict):
            raise ValueError("command must be a JSON object")
        if "seq" in msg:
            seq = _require_int(msg, "seq", 0, 255)
        else:
            seq = self._assign_seq()
        kind = msg.get("type")
        if kind == "set_setpoint":
            return Frame(FrameType.SET_SETPOINT, seq,
                         pack_setpoint(_require_int(msg, "v_mm_s", -32768, 32767)))
        if kind == "set_gains":
            i32 = 2**31
            return Frame(FrameType.SET_GAINS, seq, pack_gains(
                _require_int(msg, "kp_m", -i32, i32 - 1),
                _require_int(msg, "ki_m", -i32, i32 - 1),
                _require_int(msg, "kd_m", -i32, i32 - 1),
            ))
        if kind == "estop":
            return Frame(FrameType.ESTOP, seq, b"")
        raise ValueError(f"unknown command type {kind!r}")

    # -- TCP side -----------------------------------------------------------

    def _accept_loop(self) -> None:
        assert self._listen_sock is not None
        while not self._closing.is_set():
            try:
                conn, _addr = self._listen_sock.accept()
            except socket.timeout:
                continue
            except OSError:
                return
            client = _TcpClient(conn, self)
            with self._clients_lock:
                self._tcp_clients.append(client)
            client.start()

    def _drop_tcp(self, client: "_TcpClient") -> None:
        with self._clients_lock:
            if client in self._tcp_clients:
                self._tcp_clients.remove(client)

    # -- WebSocket side -----------------------------------------------------

    def _handle_ws(self, connection) -> None:
        client = _WsClient(connection)
        with self._clients_lock:
            self._ws_clients.append(client)
        client.start_writer()
        try:
            for message in connection:
                self._handle_ws_message(client, message)
        except Exception:
            pass
        finally:
            with self._clients_lock:
                if client in self._ws_clients:
                    self._ws_clients.remove(client)
            client.close()

    def _handle_ws_message(self, client: "_WsClient", message) -> None:
        seq = 0
        try:
            msg = json.loads(message)
            if isinstance(msg, dict) and isinstance(msg.get("seq"), int) \
                    and not isinstance(msg.get("seq"), bool):
                seq = msg["seq"] & 0xFF
            frame = self._json_to_frame(msg)
        except (ValueError, TypeError):
            reply = {"type": "ack", "seq": 0, "acked_seq": seq, "status": 1}
            client.offer(json.dumps(reply, separators=(",", ":")))
            return
        self.command_queue.put(frame)


class _TcpClient:
    def __init__(self, sock: socket.socket, bridge: TelemetryBridge):
        self._sock = sock
        self._bridge = bridge
        self._out: "queue.Queue[bytes | None]" = queue.Queue(maxsize=_OUTBOUND_QUEUE_SIZE)
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._writer = threading.Thread(target=self._write_loop, daemon=True)
        self._closed = threading.Event()

    def start(self) -> None:
        self._reader.start()
        self._writer.start()

    def offer(self, raw: bytes) -> None:
        try:
            self._out.put_nowait(raw)
        except queue.Full:
            pass  # lossy by design: slow consumers shed frames

    def close(self) -> None:
        if self._closed.is_set():
            return
        self._closed.set()
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()
        try:
            self._out.put_nowait(None)
        except queue.Full:
            pass

    def _read_loop(self) -> None:
        buffer = b""
        try:
            while not self._closed.is_set():
                chunk = self._sock.recv(4096)
                if not chunk:
                    break
                buffer += chunk
                frames, buffer, errors = decode_stream(buffer)
                self._bridge.decode_errors += errors
                for frame in frames:
                    self._bridge.command_queue.put(frame)
        except OSError:
            pass
        finally:
            self._bridge._drop_tcp(self)
            self.close()

    def _write_loop(self) -> None:
        try:
            while True:
                raw = self._out.get()
                if raw is None:
                    return
                self._sock.sendall(raw)
        except OSError:
            self._bridge._drop_tcp(self)
            self.close()


class _WsClient:
    def __init__(self, connection):
        self._conn = connection
        self._out: "queue.Queue[str | None]" = queue.Queue(maxsize=_OUTBOUND_QUEUE_SIZE)
        self._writer = threading.Thread(target=self._write_loop, daemon=True)
        self._closed = threading.Event()

    def start_writer(self) -> None:
        self._writer.start()

    def offer(self, text: str) -> None:
        try:
            self._out.put_nowait(text)
        except queue.Full:
            pass

    def close(self) -> None:
        if self._closed.is_set():
            return
        self._closed.set()
        try:
            self._out.put_nowait(None)
        except queue.Full:
            pass
        try:
            self._conn.close()
        except Exception:
            pass

    def _write_loop(self) -> None:
        try:
            while True:
                text = self._out.get()
                if text is None:
                    return
                self._conn.send(text)
        except Exception:
            self.close()
