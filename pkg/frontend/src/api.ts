import type { DatasetInfo, Report, RunParams, RunStatus } from './types.js';

export class ApiError extends Error {
  constructor(message: string, readonly status: number,
              readonly fieldErrors: Record<string, string> = {}) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin read/submit client; the console never mutates run state. */
export class ConsoleApi {
  private readonly fetchImpl: FetchLike;

  constructor(readonly baseUrl: string, fetchImpl?: FetchLike) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  async listDatasets(): Promise<DatasetInfo[]> {
    const resp = await this.fetchImpl(this.url('/api/datasets'));
    if (!resp.ok) throw new ApiError('cannot list datasets', resp.status);
    return resp.json();
  }

  async submitRun(dataset: string, n: number, params: RunParams): Promise<string> {
    const resp = await this.fetchImpl(this.url('/api/runs'), {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ dataset, n, params }),
    });
    if (resp.status === 422) {
      const body = await resp.json();
      throw new ApiError('invalid parameters', 422, body.errors ?? {});
    }
    if (resp.status !== 202) {
      throw new ApiError(`submit failed (${resp.status})`, resp.status);
    }
    const body = await resp.json();
    return body.run_id;
  }

  async getStatus(runId: string): Promise<RunStatus> {
    const resp = await this.fetchImpl(this.url(`/api/runs/${runId}`));
    if (!resp.ok) throw new ApiError(`status failed for ${runId}`, resp.status);
    return resp.json();
  }

  async getReport(runId: string): Promise<Report> {
    const resp = await this.fetchImpl(
      this.url(`/api/runs/${runId}/artifacts/report.json`));
    if (!resp.ok) throw new ApiError(`report not available`, resp.status);
    return resp.json();
  }

  artifactUrl(runId: string, name: string): string {
    return this.url(`/api/runs/${runId}/artifacts/${name}`);
  }
}
