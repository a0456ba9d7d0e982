/**
 * The single UI state store. All views project off one snapshot of server
 * state plus one ViewState; server events land here and are merged by
 * sequence number, and fetch responses that arrive out of order are
 * discarded instead of clobbering newer data.
 */

import type { RunEventDoc, RunStatus, StrategyDoc } from "./types";

/** Everything about the UI that is not server state. */
export interface ViewState {
  /** Task whose editing panel is open and whose team is elevated. */
  focusedTaskId: string | null;
  /** Exploration session currently shown on the canvas. */
  openSessionId: string | null;
  /** Execution results the user expanded; everything else stays collapsed. */
  expandedResultIds: ReadonlySet<string>;
  /** Trace node whose dependency predecessors are highlighted. */
  selectedTraceNode: string | null;
}

export function emptyViewState(): ViewState {
  return {
    focusedTaskId: null,
    openSessionId: null,
    expandedResultIds: new Set(),
    selectedTraceNode: null,
  };
}

/** The progress of one action as reconstructed from the event stream. */
export interface LiveActionResult {
  taskId: string;
  actionIndex: number;
  agentId: string | null;
  output: string | null;
  finished: boolean;
}

/** A run mirrored live from its SSE stream. */
export interface LiveRun {
  id: string;
  strategyVersion: string | null;
  status: RunStatus;
  lastSeq: number;
  actionResults: LiveActionResult[];
  objectValues: Record<string, string>;
  error: string | null;
}

function freshRun(id: string): LiveRun {
  return {
    id,
    strategyVersion: null,
    status: "running",
    lastSeq: 0,
    actionResults: [],
    objectValues: {},
    error: null,
  };
}

/**
 * Holds the latest strategy snapshot, the live run mirror, and the
 * ViewState, with the merge rules the views rely on:
 *
 * - snapshots carry a locally allocated version; a response older than the
 *   one already applied is discarded,
 * - run events apply only when their sequence number is higher than
 *   everything seen so far, so replays and duplicates are no-ops.
 *
 * View mutations (focus, expand, select) only touch ViewState; none of
 * them performs or schedules any network call.
 */
export class StudioStore {
  private strategyVersion = 0;
  private versionCounter = 0;
  strategy: StrategyDoc | null = null;
  run: LiveRun | null = null;
  view: ViewState = emptyViewState();

  /** Allocate the version tag for a snapshot fetch about to be issued. */
  nextSnapshotVersion(): number {
    this.versionCounter += 1;
    return this.versionCounter;
  }

  /**
   * Install a fetched strategy snapshot. Returns false (and changes
   * nothing) when a newer snapshot has already been applied.
   */
  applyStrategySnapshot(version: number, strategy: StrategyDoc): boolean {
    if (version < this.strategyVersion) {
      return false;
    }
    this.strategyVersion = version;
    this.strategy = strategy;
    return true;
  }

  /**
   * Merge one run event. Events at or below the last applied sequence
   * number are discarded; the return value says whether state changed.
   */
  applyRunEvent(event: RunEventDoc): boolean {
    if (event.kind === "run-started") {
      const runId = String(event.data["runId"] ?? "");
      if (this.run !== null && this.run.id === runId && event.seq <= this.run.lastSeq) {
        return false;
      }
      this.run = freshRun(runId);
      this.run.strategyVersion = (event.data["strategyVersion"] as string | undefined) ?? null;
      this.run.lastSeq = event.seq;
      return true;
    }
    if (this.run === null || event.seq <= this.run.lastSeq) {
      return false;
    }
    this.run.lastSeq = event.seq;
    const data = event.data;
    switch (event.kind) {
      case "action-started": {
        this.run.actionResults.push({
          taskId: String(data["taskId"]),
          actionIndex: Number(data["actionIndex"]),
          agentId: (data["agentId"] as string | undefined) ?? null,
          output: null,
          finished: false,
        });
        return true;
      }
      case "action-finished": {
        const taskId = String(data["taskId"]);
        const actionIndex = Number(data["actionIndex"]);
        const entry = this.run.actionResults.find(
          (r) => r.taskId === taskId && r.actionIndex === actionIndex,
        );
        if (entry === undefined) {
          this.run.actionResults.push({
            taskId,
            actionIndex,
            agentId: null,
            output: String(data["output"] ?? ""),
            finished: true,
          });
        } else {
          entry.output = String(data["output"] ?? "");
          entry.finished = true;
        }
        return true;
      }
      case "object-materialized": {
        this.run.objectValues[String(data["objectId"])] = String(data["value"] ?? "");
        return true;
      }
      case "run-finished": {
        this.run.status = (data["status"] as RunStatus | undefined) ?? "completed";
        return true;
      }
      case "run-failed": {
        this.run.status = "failed";
        this.run.error = (data["error"] as string | undefined) ?? null;
        return true;
      }
      default:
        return true;
    }
  }

  // -- view mutations (never perform any request) ---------------------------

  focusTask(taskId: string | null): void {
    this.view = { ...this.view, focusedTaskId: taskId };
  }

  openSession(sessionId: string | null): void {
    this.view = { ...this.view, openSessionId: sessionId };
  }

  /** Flip one result between expanded and collapsed. Purely local. */
  toggleResult(resultId: string): void {
    const expanded = new Set(this.view.expandedResultIds);
    if (expanded.has(resultId)) {
      expanded.delete(resultId);
    } else {
      expanded.add(resultId);
    }
    this.view = { ...this.view, expandedResultIds: expanded };
  }

  selectTraceNode(nodeId: string | null): void {
    this.view = { ...this.view, selectedTraceNode: nodeId };
  }
}
