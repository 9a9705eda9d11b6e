/** Wire schema of the assimilation service. */

export interface RunParams {
  T: number;
  steps: number;
  gamma: number;
  p: number;
  nu: number;
  eta: number;
  xi: number;
  taper: number;
  render: 'absolute' | 'minmax';
}

export interface DatasetInfo {
  name: string;
  description: string;
}

export interface NormRow {
  phase: string;
  step: number;
  time: number;
  psi: number | null;
  u: number | null;
  v: number | null;
  omega: number | null;
  speed_max: number | null;
}

export type RunState = 'queued' | 'running' | 'done' | 'diverged' | 'failed';

export interface RunStatus {
  run_id: string;
  status: RunState;
  progress: { step: number; total: number; fraction: number; phase: string };
  latest: NormRow | null;
  error: { kind: string; step?: number; phase?: string; message: string } | null;
  params: RunParams;
}

export interface Report {
  rows: Record<'psi' | 'u' | 'v' | 'omega', [number, number, number]>;
  u_max: number | null;
  reynolds: number | null;
  params: Record<string, unknown>;
}

export const ARTIFACTS = ['desiredT.png', 'computed0.png', 'evolvedT.png'] as const;
export const TERMINAL_STATES: RunState[] = ['done', 'diverged', 'failed'];
