// Dashboard state machine: telemetry history, pending commands, staleness.
// Pure data + wall-clock arguments, so tests can drive time explicitly.

import { AckMsg, ServerMsg, TelemetryMsg } from './protocol.js';

export interface Sample {
  tMs: number;      // sim time from the frame
  wallMs: number;   // local arrival time
  vMmS: number;
  dutyPm: number;
  rollCd: number;
  pitchCd: number;
  yawCd: number;
  enc: number;
}

export type CommandKind = 'set_setpoint' | 'set_gains' | 'estop';

export interface PendingCommand {
  seq: number;
  kind: CommandKind;
  detail: string;     // human-readable ("0.20 m/s")
  payload: string;    // exact JSON sent, for duplicate coalescing
  sentWallMs: number;
}

export interface CommandOutcome {
  seq: number;
  kind: CommandKind;
  detail: string;
  result: 'accepted' | 'rejected' | 'timeout';
  wallMs: number;
}

export const ACK_TIMEOUT_MS = 2000;
export const STALE_AFTER_MS = 2000;
const OUTCOME_LOG_LIMIT = 50;

export class ConsoleState {
  readonly capacity: number;
  private ring: Sample[] = [];
  private head = 0;            // index of the oldest sample once wrapped
  latest: Sample | null = null;
  droppedLate = 0;             // frames older than the displayed one
  malformed = 0;
  private pending = new Map<number, PendingCommand>();
  outcomes: CommandOutcome[] = [];
  private seqCounter = 0;

  constructor(capacity = 3000) {
    this.capacity = capacity;
  }

  /** Samples oldest-to-newest (copy, at most `capacity` long). */
  samples(): Sample[] {
    if (this.ring.length < this.capacity) return this.ring.slice();
    return this.ring.slice(this.head).concat(this.ring.slice(0, this.head));
  }

  sampleCount(): number {
    return this.ring.length;
  }

  onMessage(msg: ServerMsg | null, wallMs: number): void {
    if (msg === null) {
      this.malformed += 1;
      return;
    }
    if (msg.type === 'telemetry') this.onTelemetry(msg, wallMs);
    else this.onAck(msg, wallMs);
  }

  private onTelemetry(msg: TelemetryMsg, wallMs: number): void {
    if (this.latest !== null && msg.t_ms < this.latest.tMs) {
      this.droppedLate += 1;   // out-of-order frame: keep the newer picture
      return;
    }
    const sample: Sample = {
      tMs: msg.t_ms,
      wallMs,
      vMmS: msg.v_mm_s,
      dutyPm: msg.duty_pm,
      rollCd: msg.roll_cd,
      pitchCd: msg.pitch_cd,
      yawCd: msg.yaw_cd,
      enc: msg.enc,
    };
    if (this.ring.length < this.capacity) {
      this.ring.push(sample);
    } else {
      this.ring[this.head] = sample;
      this.head = (this.head + 1) % this.capacity;
    }
    this.latest = sample;
  }

  private onAck(msg: AckMsg, wallMs: number): void {
    const cmd = this.pending.get(msg.acked_seq);
    if (cmd === undefined) return; // unsolicited or already timed out
    this.pending.delete(msg.acked_seq);
    this.logOutcome({
      seq: cmd.seq,
      kind: cmd.kind,
      detail: cmd.detail,
      result: msg.status === 0 ? 'accepted' : 'rejected',
      wallMs,
    });
  }

  /**
   * Register a command about to be sent. Returns the seq to use, or null
   * when an identical command is already in flight (double-click guard).
   */
  beginCommand(kind: CommandKind, detail: string, payloadSansSeq: string, wallMs: number): number | null {
    for (const cmd of this.pending.values()) {
      if (cmd.kind === kind && cmd.payload === payloadSansSeq) return null;
    }
    const seq = this.nextSeq();
    this.pending.set(seq, { seq, kind, detail, payload: payloadSansSeq, sentWallMs: wallMs });
    return seq;
  }

  private nextSeq(): number {
    for (let i = 0; i < 256; i++) {
      const candidate = (this.seqCounter + i) % 256;
      if (!this.pending.has(candidate)) {
        this.seqCounter = (candidate + 1) % 256;
        return candidate;
      }
    }
    throw new Error('all 256 sequence numbers are in flight');
  }

  /** Expire pending commands older than the ack timeout. */
  sweep(nowWallMs: number): void {
    for (const [seq, cmd] of this.pending) {
      if (nowWallMs - cmd.sentWallMs >= ACK_TIMEOUT_MS) {
        this.pending.delete(seq);
        this.logOutcome({
          seq, kind: cmd.kind, detail: cmd.detail, result: 'timeout', wallMs: nowWallMs,
        });
      }
    }
  }

  pendingCommands(): PendingCommand[] {
    return Array.from(this.pending.values());
  }

  private logOutcome(outcome: CommandOutcome): void {
    this.outcomes.push(outcome);
    if (this.outcomes.length > OUTCOME_LOG_LIMIT) this.outcomes.shift();
  }

  /** True when no telemetry has arrived for STALE_AFTER_MS of wall time. */
  isStale(nowWallMs: number): boolean {
    if (this.latest === null) return true;
    return nowWallMs - this.latest.wallMs > STALE_AFTER_MS;
  }

  /** Telemetry update rate over the trailing wall-clock window. */
  updateRateHz(nowWallMs: number, windowMs = 1000): number {
    let n = 0;
    for (const s of this.ring) {
      if (nowWallMs - s.wallMs <= windowMs) n += 1;
    }
    return (n * 1000) / windowMs;
  }
}

/** Display units for the latest sample: m/s, percent, degrees. */
export function displayed(state: ConsoleState): {
  speedMps: number; dutyPct: number; rollDeg: number; pitchDeg: number; yawDeg: number;
} | null {
  const s = state.latest;
  if (s === null) return null;
  return {
    speedMps: s.vMmS / 1000,
    dutyPct: s.dutyPm / 10,
    rollDeg: s.rollCd / 100,
    pitchDeg: s.pitchCd / 100,
    yawDeg: s.yawCd / 100,
  };
}
