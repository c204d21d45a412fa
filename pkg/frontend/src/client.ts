// WebSocket client: connect/reconnect lifecycle and command submission.
// The socket constructor is injectable so tests (and Node) can supply one.

import { estopCommand, gainsCommand, parseServerMessage, setpointCommand } from './protocol.js';
import { CommandKind, ConsoleState } from './state.js';

// Handler fields are typed loosely so both the DOM WebSocket and the `ws`
// package satisfy the shape without adapters.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
}

export type SocketFactory = (url: string) => SocketLike;

export type ConnectionStatus = 'idle' | 'connecting' | 'open' | 'closed';

const BACKOFF_MS = [500, 1000, 2000, 5000];

export interface ClientOptions {
  reconnect?: boolean;
  now?: () => number;
  setTimer?: (fn: () => void, ms: number) => unknown;
  clearTimer?: (handle: unknown) => void;
}

export class ConsoleClient {
  readonly state: ConsoleState;
  status: ConnectionStatus = 'idle';
  attempts = 0;
  onchange: (() => void) | null = null;

  private url: string;
  private factory: SocketFactory;
  private sock: SocketLike | null = null;
  private closedByUser = false;
  private reconnect: boolean;
  private now: () => number;
  private setTimer: (fn: () => void, ms: number) => unknown;
  private clearTimer: (handle: unknown) => void;
  private retryHandle: unknown = null;

  constructor(url: string, state: ConsoleState, factory: SocketFactory, opts: ClientOptions = {}) {
    this.url = url;
    this.state = state;
    this.factory = factory;
    this.reconnect = opts.reconnect ?? true;
    this.now = opts.now ?? (() => Date.now());
    this.setTimer = opts.setTimer ?? ((fn, ms) => setTimeout(fn, ms));
    this.clearTimer = opts.clearTimer ?? ((h) => clearTimeout(h as Parameters<typeof clearTimeout>[0]));
  }

  connect(): void {
    this.closedByUser = false;
    this.open();
  }

  private open(): void {
    this.status = 'connecting';
    this.notify();
    const sock = this.factory(this.url);
    this.sock = sock;
    sock.onopen = () => {
      this.status = 'open';
      this.attempts = 0;
      this.notify();
    };
    sock.onmessage = (ev) => {
      if (typeof ev.data === 'string') {
        this.state.onMessage(parseServerMessage(ev.data), this.now());
      } else {
        this.state.onMessage(null, this.now());
      }
      this.notify();
    };
    sock.onerror = () => {
      // onclose always follows; nothing extra to do here
    };
    sock.onclose = () => {
      if (this.sock !== sock) return; // superseded by a newer socket
      this.sock = null;
      this.status = 'closed';
      this.notify();
      if (!this.closedByUser && this.reconnect) this.scheduleRetry();
    };
  }

  private scheduleRetry(): void {
    const delay = BACKOFF_MS[Math.min(this.attempts, BACKOFF_MS.length - 1)]!;
    this.attempts += 1;
    this.retryHandle = this.setTimer(() => this.open(), delay);
  }

  close(): void {
    this.closedByUser = true;
    if (this.retryHandle !== null) {
      this.clearTimer(this.retryHandle);
      this.retryHandle = null;
    }
    this.sock?.close();
    this.sock = null;
    this.status = 'closed';
    this.notify();
  }

  /** Periodic housekeeping; call at ~1 Hz from the UI loop. */
  tick(): void {
    this.state.sweep(this.now());
  }

  sendSetpoint(vMps: number): number | null {
    const vMmS = Math.round(vMps * 1000);
    return this.submit('set_setpoint', `${vMps.toFixed(2)} m/s`,
      (seq) => setpointCommand(vMmS, seq), `set_setpoint:${vMmS}`);
  }

  sendGains(kp: number, ki: number, kd: number): number | null {
    const kpM = Math.round(kp * 1000);
    const kiM = Math.round(ki * 1000);
    const kdM = Math.round(kd * 1000);
    return this.submit('set_gains', `kp=${kp} ki=${ki} kd=${kd}`,
      (seq) => gainsCommand(kpM, kiM, kdM, seq), `set_gains:${kpM}:${kiM}:${kdM}`);
  }

  sendEstop(): number | null {
    return this.submit('estop', 'emergency stop', (seq) => estopCommand(seq), 'estop');
  }

  private submit(kind: CommandKind, detail: string, build: (seq: number) => string, dedupKey: string): number | null {
    if (this.status !== 'open' || this.sock === null) return null;
    const seq = this.state.beginCommand(kind, detail, dedupKey, this.now());
    if (seq === null) return null; // identical command already in flight
    this.sock.send(build(seq));
    this.notify();
    return seq;
  }

  private notify(): void {
    this.onchange?.();
  }
}
