import { describe, expect, it } from 'vitest';

import { computeTracePoints } from '../src/trace.js';
import type { NormRow } from '../src/types.js';

function row(step: number, omega: number | null): NormRow {
  return { phase: 'backward', step, time: step * 1e-6, psi: null, u: null,
           v: null, omega, speed_max: null };
}

describe('computeTracePoints', () => {
  it('maps steps onto x and log-norms onto y', () => {
    const rows = [row(1, 1), row(2, 10), row(3, 100)];
    const pts = computeTracePoints(rows, 101, 51);
    expect(pts).toHaveLength(3);
    expect(pts[0].x).toBe(0);
    expect(pts[2].x).toBe(100);
    expect(pts[0].y).toBe(50);  // smallest norm at the bottom
    expect(pts[2].y).toBe(0);   // largest at the top
    expect(pts[1].y).toBeCloseTo(25, 6);  // log-midpoint
  });

  it('skips empty and non-positive norms', () => {
    expect(computeTracePoints([], 100, 50)).toEqual([]);
    const pts = computeTracePoints([row(1, 0), row(2, 5)], 100, 50);
    expect(pts).toHaveLength(1);
  });

  it('handles flat traces without dividing by zero', () => {
    const pts = computeTracePoints([row(1, 7), row(2, 7)], 100, 50);
    expect(pts.every((p) => Number.isFinite(p.y))).toBe(true);
  });
});
