// Attitude widget: an artificial-horizon-style dial for roll plus pitch
// and yaw readouts drawn around it.

export function paintAttitude(canvas: HTMLCanvasElement, rollDeg: number, pitchDeg: number, yawDeg: number): void {
  const ctx = canvas.getContext('2d');
  if (ctx === null) return;
  const { width: w, height: h } = canvas;
  const cx = w / 2;
  const cy = h / 2;
  const r = Math.min(w, h) / 2 - 18;
  ctx.clearRect(0, 0, w, h);

  ctx.save();
  ctx.translate(cx, cy);
  ctx.rotate((rollDeg * Math.PI) / 180);
  // sky and ground halves, pitch shifts the horizon line
  const pitchShift = (pitchDeg / 45) * r;
  ctx.beginPath();
  ctx.arc(0, 0, r, 0, 2 * Math.PI);
  ctx.clip();
  ctx.fillStyle = '#16324f';
  ctx.fillRect(-r, -r + pitchShift, 2 * r, r);
  ctx.fillStyle = '#3d2b1f';
  ctx.fillRect(-r, pitchShift, 2 * r, r);
  ctx.strokeStyle = '#e8e8e8';
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.moveTo(-r, pitchShift);
  ctx.lineTo(r, pitchShift);
  ctx.stroke();
  ctx.restore();

  // fixed aircraft reference
  ctx.strokeStyle = '#ffd166';
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(cx - 24, cy);
  ctx.lineTo(cx - 6, cy);
  ctx.moveTo(cx + 6, cy);
  ctx.lineTo(cx + 24, cy);
  ctx.stroke();

  ctx.strokeStyle = '#566173';
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, 2 * Math.PI);
  ctx.stroke();

  ctx.fillStyle = '#c7cdd8';
  ctx.font = '11px monospace';
  ctx.fillText(`roll ${rollDeg.toFixed(1)}°`, 6, 14);
  ctx.fillText(`pitch ${pitchDeg.toFixed(1)}°`, 6, h - 18);
  ctx.fillText(`yaw ${yawDeg.toFixed(1)}°`, 6, h - 5);
}
