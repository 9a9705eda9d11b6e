import { describe, expect, it } from 'vitest';

import { DEFAULT_PARAMS } from '../src/params.js';
import { TuningSession } from '../src/session.js';

describe('TuningSession', () => {
  it('appends history entries and never rewrites them', () => {
    const session = new TuningSession();
    session.record(DEFAULT_PARAMS, 'r1', 'done', 1);
    const snapshot = session.entries;
    session.record({ ...DEFAULT_PARAMS, gamma: 0 }, 'r2', 'diverged', 2);
    expect(session.length).toBe(2);
    expect(snapshot.length).toBe(1);  // earlier snapshot untouched
    expect(session.entries[0].runId).toBe('r1');
    expect(session.entries[1].verdict).toBe('diverged');
    expect(Object.isFrozen(session.entries[0])).toBe(true);
  });

  it('copies parameters so later form edits cannot alter history', () => {
    const session = new TuningSession();
    const params = { ...DEFAULT_PARAMS };
    session.record(params, 'r1', 'done', 1);
    params.gamma = 123;
    expect(session.entries[0].params.gamma).toBe(DEFAULT_PARAMS.gamma);
  });
});
