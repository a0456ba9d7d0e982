/**
 * Wire-format documents exchanged with the coordination service under
 * /api/v1. Field names mirror the JSON payloads exactly (camelCase), so a
 * fetched body can be used as one of these types without any reshaping.
 */

/** The four cooperative roles an action can play inside a task process. */
export type InteractionType = "propose" | "critique" | "improve" | "finalize";

/** Where a key object comes from: seeded by the user, or produced by a task. */
export type KeyObjectOrigin =
  | { kind: "initial" }
  | { kind: "taskOutput"; taskId: string };

/** A named intermediate artifact of the collaboration. */
export interface KeyObjectDoc {
  id: string;
  name: string;
  description: string;
  origin: KeyObjectOrigin;
}

/** A declared dependency of an action: an earlier action or a task input. */
export type InputRefDoc =
  | { kind: "keyObject"; keyObjectId: string }
  | { kind: "action"; actionIndex: number };

/** One step of a task process, performed by a single agent. */
export interface ActionDoc {
  agentId: string;
  instruction: string;
  interactionType: InteractionType;
  importantInputs: InputRefDoc[];
}

/** One task of the plan outline, with its team and action sequence. */
export interface TaskDoc {
  id: string;
  stepName: string;
  taskContent: string;
  inputObjectIds: string[];
  outputObjectId: string;
  team: string[];
  process: ActionDoc[];
}

/** A candidate collaborator on the agent board. */
export interface AgentDoc {
  id: string;
  name: string;
  profile: string;
  /** Optional picture URL; some serializations omit it when unset. */
  avatar?: string | null;
}

export interface BoardDoc {
  agents: AgentDoc[];
}

/** A complete coordination strategy: goal, key objects, tasks, and board. */
export interface StrategyDoc {
  goal: string;
  keyObjects: KeyObjectDoc[];
  tasks: TaskDoc[];
  agentBoard: BoardDoc;
}

/** A capability dimension agents are scored on for one task. */
export interface AspectDoc {
  name: string;
  source: "llm" | "user";
  selected: boolean;
}

/** Scores and scoring rationales for one agent across all rated aspects. */
export interface ScoreRowDoc {
  agentId: string;
  scores: Record<string, number>;
  rationales: Record<string, string>;
}

export interface ScoreMatrixDoc {
  taskId: string;
  aspects: string[];
  rows: ScoreRowDoc[];
}

/** One row of the ranked assignment table returned by the rank endpoint. */
export interface RankRowDoc {
  agentId: string;
  name: string;
  partition: "assigned" | "unassigned";
  mean: number;
  scores: Record<string, number>;
  rationales: Record<string, string>;
}

export interface RankResponseDoc {
  rows: RankRowDoc[];
  selectedAspects: string[];
}

/** The branch request that produced an exploration node, when it has one. */
export interface BranchRequestDoc {
  branchPoint: number;
  requirement: string;
  count: number;
}

/** One node of an exploration session's version forest. */
export interface SessionNodeDoc {
  id: string;
  parentId: string | null;
  /** Content hash of the node's payload in the session's payload map. */
  payload: string;
  createdAt: number;
  request?: BranchRequestDoc;
}

export type SessionKind = "planOutline" | "taskProcess" | "agentAssignment";

/**
 * An exploration session document. Plan and process sessions carry their
 * variant payloads keyed by content hash; assignment sessions additionally
 * expose the aspect list, score matrix, and working team.
 */
export interface SessionDoc {
  id: string;
  kind: SessionKind;
  activeBaseline: string;
  nodes: SessionNodeDoc[];
  payloads: Record<string, unknown>;
  taskId?: string;
  aspects?: AspectDoc[];
  matrix?: ScoreMatrixDoc | null;
  team?: string[];
}

export type JobStatus = "pending" | "running" | "completed" | "failed";

/** An asynchronous generation job, polled until completed or failed. */
export interface JobDoc {
  id: string;
  kind: string;
  status: JobStatus;
  error: { code: string; message: string } | null;
  result?: unknown;
}

/** An input an executed action actually read, with the content it saw. */
export interface ResolvedInputDoc {
  ref: InputRefDoc;
  content: string;
}

/** The recorded outcome of one executed action. */
export interface ActionResultDoc {
  taskId: string;
  actionIndex: number;
  agentId: string;
  promptRendered: string;
  output: string;
  started: number;
  finished: number;
  resolvedInputs: ResolvedInputDoc[];
}

export type RunStatus = "pending" | "running" | "completed" | "failed";

export type RunEventKind =
  | "run-started"
  | "task-started"
  | "action-started"
  | "action-finished"
  | "object-materialized"
  | "task-finished"
  | "run-finished"
  | "run-failed"
  | "job-status";

/** One entry of a run's append-only event stream. */
export interface RunEventDoc {
  seq: number;
  kind: RunEventKind;
  data: Record<string, unknown>;
}

/** The full record of one strategy execution. */
export interface RunRecordDoc {
  id: string;
  strategyVersion: string;
  status: RunStatus;
  actionResults: ActionResultDoc[];
  /** Key object id to materialized content, for finalized task outputs. */
  objectValues: Record<string, string>;
  events: RunEventDoc[];
  error?: string | null;
  failedAt?: { taskId: string; actionIndex: number };
}

/**
 * The dependency graph over execution results. Node ids are either
 * "action:{taskId}:{index}" or "object:{keyObjectId}". When the trace was
 * requested for a specific node, traceBack lists its predecessors in
 * topological order (the queried node itself is not included).
 */
export interface TraceDoc {
  nodes: string[];
  edges: [string, string][];
  traceBack?: string[];
}

export interface RunSummaryDoc {
  id: string;
  status: string;
}

/** A saved project as returned by the project endpoints. */
export interface ProjectDoc {
  id: string;
  name: string;
  goal: string;
  agentBoard: BoardDoc;
  versions: Record<string, unknown>;
  explorationSessions: unknown[];
  runIndex: Record<string, unknown>;
  currentStrategy: string | null;
}

/** The error envelope every non-2xx response carries. */
export interface ApiErrorBody {
  error: { code: string; message: string };
}
