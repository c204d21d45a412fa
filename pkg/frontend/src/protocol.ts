// JSON messages exchanged with the simulator's WebSocket bridge.
// All numeric fields are integers in wire units: mm/s for speed,
// thousandths for duty and gains, centidegrees for attitude angles.

export interface TelemetryMsg {
  type: 'telemetry';
  seq: number;
  t_ms: number;      // sim time
  v_mm_s: number;    // estimated speed
  duty_pm: number;   // motor duty, -1000..1000
  roll_cd: number;
  pitch_cd: number;
  yaw_cd: number;
  enc: number;       // cumulative encoder count
}

export interface AckMsg {
  type: 'ack';
  seq: number;
  acked_seq: number;
  status: number;    // 0 accepted, anything else rejected
}

export type ServerMsg = TelemetryMsg | AckMsg;

function isInt(value: unknown): value is number {
  return typeof value === 'number' && Number.isInteger(value);
}

const TELEMETRY_FIELDS = ['seq', 't_ms', 'v_mm_s', 'duty_pm', 'roll_cd', 'pitch_cd', 'yaw_cd', 'enc'] as const;

/** Strictly validate one incoming message; anything off-shape returns null. */
export function parseServerMessage(raw: string): ServerMsg | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== 'object' || data === null) return null;
  const msg = data as Record<string, unknown>;
  if (msg.type === 'telemetry') {
    for (const field of TELEMETRY_FIELDS) {
      if (!isInt(msg[field])) return null;
    }
    return msg as unknown as TelemetryMsg;
  }
  if (msg.type === 'ack') {
    if (!isInt(msg.seq) || !isInt(msg.acked_seq) || !isInt(msg.status)) return null;
    return msg as unknown as AckMsg;
  }
  return null;
}

function checkSeq(seq: number): void {
  if (!Number.isInteger(seq) || seq < 0 || seq > 255) {
    throw new RangeError(`seq must be 0..255, got ${seq}`);
  }
}

export function setpointCommand(vMmS: number, seq: number): string {
  checkSeq(seq);
  if (!Number.isInteger(vMmS) || vMmS < -32768 || vMmS > 32767) {
    throw new RangeError(`setpoint ${vMmS} mm/s outside the i16 wire range`);
  }
  return JSON.stringify({ type: 'set_setpoint', v_mm_s: vMmS, seq });
}

export function gainsCommand(kpM: number, kiM: number, kdM: number, seq: number): string {
  checkSeq(seq);
  for (const [name, v] of [['kp_m', kpM], ['ki_m', kiM], ['kd_m', kdM]] as const) {
    if (!Number.isInteger(v) || v < -2147483648 || v > 2147483647) {
      throw new RangeError(`${name} ${v} outside the i32 wire range`);
    }
  }
  return JSON.stringify({ type: 'set_gains', kp_m: kpM, ki_m: kiM, kd_m: kdM, seq });
}

export function estopCommand(seq: number): string {
  checkSeq(seq);
  return JSON.stringify({ type: 'estop', seq });
}
