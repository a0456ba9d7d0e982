/**
 * HTTP client for the coordination service. Every view in the studio reads
 * through this client; nothing else in the frontend talks to the network.
 * The fetch implementation is injectable so tests can run against a stub
 * or a live server interchangeably.
 */

import { readEventPayloads } from "./sse";
import type {
  ApiErrorBody,
  AspectDoc,
  AgentDoc,
  JobDoc,
  ProjectDoc,
  RankResponseDoc,
  RunEventDoc,
  RunRecordDoc,
  RunSummaryDoc,
  ScoreMatrixDoc,
  SessionDoc,
  SessionKind,
  StrategyDoc,
  TraceDoc,
} from "./types";

/** Error raised for any non-2xx response, carrying the service error code. */
export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }

  static async fromResponse(response: Response): Promise<ApiError> {
    let code = "internal-error";
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as ApiErrorBody;
      code = body.error.code;
      message = body.error.message;
    } catch {
      // A body that is not the error envelope still yields a usable error.
    }
    return new ApiError(response.status, code, message);
  }
}

export type FetchLike = typeof fetch;

export interface JobWaitOptions {
  /** Poll interval in milliseconds. */
  intervalMs?: number;
  /** Give up after this many milliseconds. */
  timeoutMs?: number;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Typed access to every /api/v1 endpoint the studio uses. */
export class StudioClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "") + "/api/v1";
    this.fetchImpl = fetchImpl ?? fetch;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      throw await ApiError.fromResponse(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<{ ok: boolean }> {
    return this.request("GET", "/health");
  }

  meta(): Promise<{ errorCodes: string[]; defaultProvider: string }> {
    return this.request("GET", "/meta");
  }

  // -- projects ------------------------------------------------------------

  createProject(name: string, goal: string): Promise<{ id: string; name: string; goal: string }> {
    return this.request("POST", "/projects", { name, goal });
  }

  getProject(projectId: string): Promise<ProjectDoc> {
    return this.request("GET", `/projects/${projectId}`);
  }

  getStrategy(projectId: string): Promise<StrategyDoc> {
    return this.request("GET", `/projects/${projectId}/strategy`);
  }

  setBoard(projectId: string, agents: AgentDoc[]): Promise<{ agents: number }> {
    return this.request("PUT", `/projects/${projectId}/board`, { agents });
  }

  editStrategy(
    projectId: string,
    edit: {
      taskId: string;
      stepName?: string;
      taskContent?: string;
      actionIndex?: number;
      instruction?: string;
    },
  ): Promise<{ strategyVersion: string }> {
    return this.request("PATCH", `/projects/${projectId}/strategy`, edit);
  }

  // -- generation jobs -----------------------------------------------------

  generate(
    projectId: string,
    options: { kind?: "full" | "outline"; provider?: string } = {},
  ): Promise<{ jobId: string }> {
    return this.request("POST", `/projects/${projectId}/generate`, options);
  }

  getJob(jobId: string): Promise<JobDoc> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  /** Poll a job until it completes; throws ApiError-like failure on error. */
  async waitForJob(jobId: string, options: JobWaitOptions = {}): Promise<JobDoc> {
    const interval = options.intervalMs ?? 50;
    const deadline = Date.now() + (options.timeoutMs ?? 60_000);
    for (;;) {
      const job = await this.getJob(jobId);
      if (job.status === "completed") {
        return job;
      }
      if (job.status === "failed") {
        const code = job.error?.code ?? "internal-error";
        const message = job.error?.message ?? "job failed";
        throw new ApiError(502, code, message);
      }
      if (Date.now() > deadline) {
        throw new ApiError(504, "internal-error", `job ${jobId} did not finish in time`);
      }
      await sleep(interval);
    }
  }

  // -- exploration sessions ------------------------------------------------

  openSession(projectId: string, kind: SessionKind, taskId?: string): Promise<SessionDoc> {
    return this.request("POST", `/projects/${projectId}/sessions`, { kind, taskId });
  }

  getSession(projectId: string, sessionId: string): Promise<SessionDoc> {
    return this.request("GET", `/projects/${projectId}/sessions/${sessionId}`);
  }

  spawnBranches(
    projectId: string,
    sessionId: string,
    request: { branchPoint: number; requirement: string; count?: number },
  ): Promise<{ jobId: string }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/branches`, request);
  }

  setBaseline(projectId: string, sessionId: string, nodeId: string): Promise<SessionDoc> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/baseline`, {
      nodeId,
    });
  }

  adoptNode(
    projectId: string,
    sessionId: string,
    nodeId: string,
  ): Promise<{ strategyVersion: string; session: SessionDoc }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/adopt`, { nodeId });
  }

  deriveAspects(projectId: string, sessionId: string): Promise<{ jobId: string }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/derive-aspects`, {});
  }

  addAspect(projectId: string, sessionId: string, name: string): Promise<{ aspects: AspectDoc[] }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/aspects`, { name });
  }

  setAspectSelected(
    projectId: string,
    sessionId: string,
    name: string,
    selected: boolean,
  ): Promise<{ aspects: AspectDoc[] }> {
    return this.request("PATCH", `/projects/${projectId}/sessions/${sessionId}/aspects`, {
      name,
      selected,
    });
  }

  scoreAgents(projectId: string, sessionId: string): Promise<{ jobId: string }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/score`, {});
  }

  getRank(projectId: string, sessionId: string): Promise<RankResponseDoc> {
    return this.request("GET", `/projects/${projectId}/sessions/${sessionId}/rank`);
  }

  changeTeam(
    projectId: string,
    sessionId: string,
    change: { add?: string[]; remove?: string[] },
  ): Promise<{ matrix: ScoreMatrixDoc | null }> {
    return this.request("POST", `/projects/${projectId}/sessions/${sessionId}/team`, change);
  }

  assignTeam(
    projectId: string,
    taskId: string,
    change: { add?: string[]; remove?: string[] },
  ): Promise<{ team: string[]; strategyVersion: string }> {
    return this.request("POST", `/projects/${projectId}/tasks/${taskId}/assign`, change);
  }

  regenerateProcess(
    projectId: string,
    taskId: string,
    options: { provider?: string } = {},
  ): Promise<{ jobId: string }> {
    return this.request("POST", `/projects/${projectId}/tasks/${taskId}/process`, options);
  }

  // -- runs ----------------------------------------------------------------

  startRun(projectId: string, options: { provider?: string } = {}): Promise<{ runId: string }> {
    return this.request("POST", `/projects/${projectId}/runs`, options);
  }

  listRuns(projectId: string): Promise<{ runs: RunSummaryDoc[] }> {
    return this.request("GET", `/projects/${projectId}/runs`);
  }

  getRun(runId: string): Promise<RunRecordDoc> {
    return this.request("GET", `/runs/${runId}`);
  }

  /** Poll a run until it leaves the running states. */
  async waitForRun(runId: string, options: JobWaitOptions = {}): Promise<RunRecordDoc> {
    const interval = options.intervalMs ?? 50;
    const deadline = Date.now() + (options.timeoutMs ?? 60_000);
    for (;;) {
      const run = await this.getRun(runId);
      if (run.status === "completed" || run.status === "failed") {
        return run;
      }
      if (Date.now() > deadline) {
        throw new ApiError(504, "internal-error", `run ${runId} did not finish in time`);
      }
      await sleep(interval);
    }
  }

  getTrace(runId: string, node?: string): Promise<TraceDoc> {
    const query = node === undefined ? "" : `?node=${encodeURIComponent(node)}`;
    return this.request("GET", `/runs/${runId}/trace${query}`);
  }

  /** Stream a run's events as they are emitted, in sequence order. */
  async *streamRunEvents(runId: string): AsyncGenerator<RunEventDoc, void, undefined> {
    const response = await this.fetchImpl(`${this.base}/runs/${runId}/events`, { method: "GET" });
    if (!response.ok) {
      throw await ApiError.fromResponse(response);
    }
    if (response.body === null) {
      throw new ApiError(502, "internal-error", "event stream has no body");
    }
    for await (const payload of readEventPayloads(response.body)) {
      yield JSON.parse(payload) as RunEventDoc;
    }
  }

  exportRun(
    projectId: string,
    runId: string,
    format: "markdown" | "json" = "markdown",
  ): Promise<{ document: string }> {
    return this.request("POST", `/projects/${projectId}/export`, { runId, format });
  }
}
