// Dashboard bootstrap: wires the DOM to the client/state machinery.

import { paintAttitude } from './attitude.js';
import { ChartSpec, paint } from './charts.js';
import { ConsoleClient } from './client.js';
import { ConsoleState, displayed } from './state.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

const state = new ConsoleState();
let client: ConsoleClient | null = null;

const urlInput = el<HTMLInputElement>('url');
const connectBtn = el<HTMLButtonElement>('connect');
const statusEl = el<HTMLSpanElement>('status');
const staleEl = el<HTMLSpanElement>('stale');
const rateEl = el<HTMLSpanElement>('rate');
const speedEl = el<HTMLSpanElement>('speed');
const dutyEl = el<HTMLSpanElement>('duty');
const encEl = el<HTMLSpanElement>('enc');
const setpointInput = el<HTMLInputElement>('setpoint');
const setpointBtn = el<HTMLButtonElement>('send-setpoint');
const kpInput = el<HTMLInputElement>('kp');
const kiInput = el<HTMLInputElement>('ki');
const kdInput = el<HTMLInputElement>('kd');
const gainsBtn = el<HTMLButtonElement>('send-gains');
const estopBtn = el<HTMLButtonElement>('estop');
const pendingEl = el<HTMLUListElement>('pending');
const logEl = el<HTMLUListElement>('log');
const speedChart = el<HTMLCanvasElement>('speed-chart');
const dutyChart = el<HTMLCanvasElement>('duty-chart');
const attitudeCanvas = el<HTMLCanvasElement>('attitude');

const speedSpec: ChartSpec = {
  min: -0.1, max: 0.5, windowMs: 20000,
  series: [{ label: 'v m/s', color: '#4cc2ff', pick: (s) => s.vMmS / 1000 }],
};
const dutySpec: ChartSpec = {
  min: -1.1, max: 1.1, windowMs: 20000,
  series: [{ label: 'duty', color: '#ffa14c', pick: (s) => s.dutyPm / 1000 }],
};

connectBtn.addEventListener('click', () => {
  client?.close();
  client = new ConsoleClient(urlInput.value, state, (url) => new WebSocket(url));
  client.connect();
});

setpointBtn.addEventListener('click', () => {
  client?.sendSetpoint(Number(setpointInput.value));
});
gainsBtn.addEventListener('click', () => {
  client?.sendGains(Number(kpInput.value), Number(kiInput.value), Number(kdInput.value));
});
estopBtn.addEventListener('click', () => {
  client?.sendEstop();
});

setInterval(() => client?.tick(), 500);

function render(): void {
  const now = Date.now();
  statusEl.textContent = client?.status ?? 'idle';
  const stale = state.isStale(now);
  staleEl.textContent = stale ? 'STALE' : 'live';
  staleEl.className = stale ? 'bad' : 'good';
  rateEl.textContent = `${state.updateRateHz(now).toFixed(0)} Hz`;

  const d = displayed(state);
  if (d !== null) {
    speedEl.textContent = `${d.speedMps.toFixed(3)} m/s`;
    dutyEl.textContent = `${d.dutyPct.toFixed(1)} %`;
    encEl.textContent = String(state.latest?.enc ?? 0);
    paintAttitude(attitudeCanvas, d.rollDeg, d.pitchDeg, d.yawDeg);
  }
  const samples = state.samples();
  paint(speedChart, samples, speedSpec);
  paint(dutyChart, samples, dutySpec);

  pendingEl.replaceChildren(...state.pendingCommands().map((cmd) => {
    const li = document.createElement('li');
    li.textContent = `#${cmd.seq} ${cmd.kind} ${cmd.detail} ...`;
    return li;
  }));
  logEl.replaceChildren(...state.outcomes.slice(-8).reverse().map((o) => {
    const li = document.createElement('li');
    li.textContent = `#${o.seq} ${o.kind} ${o.detail}: ${o.result}`;
    li.className = o.result === 'accepted' ? 'good' : 'bad';
    return li;
  }));
  requestAnimationFrame(render);
}

requestAnimationFrame(render);
