import type { ConsoleApi } from './api.js';
import type { RunStatus } from './types.js';
import { TERMINAL_STATES } from './types.js';

type Sleeper = (ms: number) => Promise<void>;

const defaultSleep: Sleeper = (ms) => new Promise((r) => setTimeout(r, ms));

/** Polls a run at a fixed cadence until it reaches a terminal state. */
export class RunPoller {
  constructor(private readonly api: ConsoleApi,
              private readonly intervalMs = 1000,
              private readonly sleep: Sleeper = defaultSleep) {}

  async watch(runId: string,
              onUpdate?: (status: RunStatus) => void): Promise<RunStatus> {
    for (;;) {
      const status = await this.api.getStatus(runId);
      onUpdate?.(status);
      if (TERMINAL_STATES.includes(status.status)) return status;
      await this.sleep(this.intervalMs);
    }
  }
}

/** Badge text for unstable runs, or null when there is nothing to flag. */
export function divergenceBadge(status: RunStatus): string | null {
  if (status.status === 'diverged') {
    const step = status.error?.step;
    return step != null ? `diverged at step ${step}` : 'diverged';
  }
  if (status.status === 'failed') {
    return `failed: ${status.error?.message ?? 'unknown error'}`;
  }
  return null;
}
