// Strip-chart rendering. The point layout is a pure function so tests can
// check scaling without a canvas; paint() does the actual drawing.

import { Sample } from './state.js';

export interface Series {
  label: string;
  color: string;
  pick: (s: Sample) => number;   // value in display units
}

export interface ChartSpec {
  min: number;
  max: number;
  windowMs: number;              // sim-time span shown
  series: Series[];
}

/**
 * Map samples to [0,1]x[0,1] polyline coordinates, newest at x=1.
 * y=0 is the top edge (canvas convention); values clamp to the range.
 */
export function layout(samples: Sample[], pick: (s: Sample) => number, spec: ChartSpec): Array<[number, number]> {
  if (samples.length === 0) return [];
  const tEnd = samples[samples.length - 1]!.tMs;
  const tStart = tEnd - spec.windowMs;
  const points: Array<[number, number]> = [];
  for (const s of samples) {
    if (s.tMs < tStart) continue;
    const x = spec.windowMs === 0 ? 1 : (s.tMs - tStart) / spec.windowMs;
    const frac = (pick(s) - spec.min) / (spec.max - spec.min);
    const y = 1 - Math.min(1, Math.max(0, frac));
    points.push([x, y]);
  }
  return points;
}

export function paint(canvas: HTMLCanvasElement, samples: Sample[], spec: ChartSpec): void {
  const ctx = canvas.getContext('2d');
  if (ctx === null) return;
  const { width: w, height: h } = canvas;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = '#2a2f38';
  ctx.lineWidth = 1;
  for (const frac of [0.25, 0.5, 0.75]) {
    ctx.beginPath();
    ctx.moveTo(0, h * frac);
    ctx.lineTo(w, h * frac);
    ctx.stroke();
  }
  for (const series of spec.series) {
    const pts = layout(samples, series.pick, spec);
    if (pts.length < 2) continue;
    ctx.strokeStyle = series.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    pts.forEach(([x, y], i) => {
      if (i === 0) ctx.moveTo(x * w, y * h);
      else ctx.lineTo(x * w, y * h);
    });
    ctx.stroke();
  }
  ctx.fillStyle = '#8b93a1';
  ctx.font = '10px monospace';
  ctx.fillText(String(spec.max), 4, 10);
  ctx.fillText(String(spec.min), 4, h - 3);
  let lx = 40;
  for (const series of spec.series) {
    ctx.fillStyle = series.color;
    ctx.fillText(series.label, lx, 10);
    lx += ctx.measureText(series.label).width + 14;
  }
}
