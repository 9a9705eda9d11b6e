import type { RunParams, RunState } from './types.js';

export interface HistoryEntry {
  readonly params: RunParams;
  readonly runId: string;
  readonly verdict: RunState;
  readonly finishedAt: number;
}

/** Append-only log of (parameters -> run -> verdict) tuning attempts. */
export class TuningSession {
  dataset = 'chart';
  gridSize = 256;
  private readonly log: HistoryEntry[] = [];

  record(params: RunParams, runId: string, verdict: RunState,
         finishedAt = Date.now()): HistoryEntry {
    const entry: HistoryEntry = Object.freeze(
      { params: { ...params }, runId, verdict, finishedAt });
    this.log.push(entry);
    return entry;
  }

  get entries(): readonly HistoryEntry[] {
    return this.log.slice();
  }

  get length(): number {
    return this.log.length;
  }
}
