import type { NormRow } from './types.js';

export interface TracePoint {
  x: number;
  y: number;
}

/** Scale vorticity-norm history onto a canvas: x is the step index, y is
 * log10 of the norm (instability shows as a rising tail). */
export function computeTracePoints(rows: NormRow[], width: number,
                                   height: number): TracePoint[] {
  const usable = rows.filter((r) => r.omega != null && r.omega > 0);
  if (usable.length === 0) return [];
  const logs = usable.map((r) => Math.log10(r.omega as number));
  let lo = Math.min(...logs);
  let hi = Math.max(...logs);
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const maxStep = usable[usable.length - 1].step;
  const minStep = usable[0].step;
  const span = Math.max(1, maxStep - minStep);
  return usable.map((r, i) => ({
    x: ((r.step - minStep) / span) * (width - 1),
    y: (height - 1) * (1 - (logs[i] - lo) / (hi - lo)),
  }));
}

export function drawTrace(canvas: HTMLCanvasElement,
                          rows: NormRow[]): TracePoint[] {
  const points = computeTracePoints(rows, canvas.width, canvas.height);
  const ctx = canvas.getContext ? canvas.getContext('2d') : null;
  if (ctx && points.length > 1) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    ctx.beginPath();
    ctx.moveTo(points[0].x, points[0].y);
    for (const p of points.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.strokeStyle = '#2563eb';
    ctx.stroke();
  }
  return points;
}
