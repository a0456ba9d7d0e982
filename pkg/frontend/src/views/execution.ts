/**
 * Execution view: results grouped by task in plan order, each group
 * collapsed until the user expands it. Focusing one result highlights its
 * dependency predecessors exactly as the trace endpoint reports them, and
 * names the strategy elements (tasks, objects, agents) the other views
 * should light up. Works identically off a finished run record or the
 * live mirror a run's event stream builds up.
 */

import { INTERACTION_COLORS } from "../colors";
import type { ViewState } from "../state";
import type { InteractionType, StrategyDoc, TraceDoc } from "../types";

/** The slice of a run the view needs; both RunRecordDoc and the live run
 * mirror satisfy it structurally. */
export interface ExecutionSource {
  id: string;
  status: string;
  actionResults: ReadonlyArray<{
    taskId: string;
    actionIndex: number;
    agentId?: string | null;
    output?: string | null;
  }>;
  objectValues: Record<string, string>;
}

export interface ExecutionResultView {
  /** Trace-compatible id: "action:{taskId}:{index}". */
  id: string;
  taskId: string;
  actionIndex: number;
  agentId: string | null;
  agentName: string | null;
  interactionType: InteractionType | null;
  color: string | null;
  output: string | null;
  expanded: boolean;
  /** Read-only affordance: flips ViewState, never calls the service. */
  toggle: { type: "toggle-result"; resultId: string };
  focus: { type: "select-trace-node"; nodeId: string };
}

export interface ExecutionGroupView {
  taskId: string;
  stepName: string;
  /** Trace-compatible id of the task's output object node. */
  objectNodeId: string;
  outputObjectId: string;
  objectValue: string | null;
  results: ExecutionResultView[];
}

export interface FocusHighlight {
  /** The selected trace node. */
  nodeId: string;
  /** Its predecessors, verbatim from the trace endpoint's back-trace. */
  predecessors: string[];
  /** Dependency edges among the selected node and its predecessors. */
  links: [string, string][];
  highlightedTaskIds: string[];
  highlightedObjectIds: string[];
  highlightedAgentIds: string[];
}

export interface ExecutionView {
  runId: string | null;
  status: string | null;
  groups: ExecutionGroupView[];
  focus: FocusHighlight | null;
}

/** Split a trace node id into its kind and coordinates. */
export function parseTraceNode(
  nodeId: string,
): { kind: "action"; taskId: string; actionIndex: number } | { kind: "object"; objectId: string } | null {
  if (nodeId.startsWith("object:")) {
    return { kind: "object", objectId: nodeId.slice("object:".length) };
  }
  if (nodeId.startsWith("action:")) {
    const rest = nodeId.slice("action:".length);
    const split = rest.lastIndexOf(":");
    if (split === -1) {
      return null;
    }
    const index = Number(rest.slice(split + 1));
    if (!Number.isInteger(index)) {
      return null;
    }
    return { kind: "action", taskId: rest.slice(0, split), actionIndex: index };
  }
  return null;
}

function focusHighlight(
  strategy: StrategyDoc,
  trace: TraceDoc,
  nodeId: string,
): FocusHighlight {
  const predecessors = trace.traceBack ?? [];
  const scope = new Set<string>([...predecessors, nodeId]);
  const links = trace.edges.filter(([from, to]) => scope.has(from) && scope.has(to));

  const taskIds = new Set<string>();
  const objectIds = new Set<string>();
  const agentIds = new Set<string>();
  for (const member of scope) {
    const parsed = parseTraceNode(member);
    if (parsed === null) {
      continue;
    }
    if (parsed.kind === "object") {
      objectIds.add(parsed.objectId);
      continue;
    }
    taskIds.add(parsed.taskId);
    const action = strategy.tasks
      .find((task) => task.id === parsed.taskId)
      ?.process[parsed.actionIndex];
    if (action !== undefined) {
      agentIds.add(action.agentId);
    }
  }

  return {
    nodeId,
    predecessors: [...predecessors],
    links,
    highlightedTaskIds: [...taskIds],
    highlightedObjectIds: [...objectIds],
    highlightedAgentIds: [...agentIds],
  };
}

/**
 * Project a run onto the grouped result list. Results stay collapsed
 * unless their id is in ViewState's expanded set; expanding is a local
 * state flip, so projecting never initiates generation or execution.
 */
export function renderExecution(
  strategy: StrategyDoc,
  record: ExecutionSource | null,
  trace: TraceDoc | null,
  view: ViewState,
): ExecutionView {
  const groups = strategy.tasks.map((task): ExecutionGroupView => {
    const results = (record?.actionResults ?? [])
      .filter((result) => result.taskId === task.id)
      .slice()
      .sort((a, b) => a.actionIndex - b.actionIndex)
      .map((result): ExecutionResultView => {
        const id = `action:${task.id}:${result.actionIndex}`;
        const action = task.process[result.actionIndex];
        const agentId = result.agentId ?? action?.agentId ?? null;
        const agent = strategy.agentBoard.agents.find((a) => a.id === agentId);
        return {
          id,
          taskId: task.id,
          actionIndex: result.actionIndex,
          agentId,
          agentName: agent?.name ?? null,
          interactionType: action?.interactionType ?? null,
          color: action === undefined ? null : INTERACTION_COLORS[action.interactionType],
          output: result.output ?? null,
          expanded: view.expandedResultIds.has(id),
          toggle: { type: "toggle-result", resultId: id },
          focus: { type: "select-trace-node", nodeId: id },
        };
      });
    return {
      taskId: task.id,
      stepName: task.stepName,
      objectNodeId: `object:${task.outputObjectId}`,
      outputObjectId: task.outputObjectId,
      objectValue: record?.objectValues[task.outputObjectId] ?? null,
      results,
    };
  });

  const focus =
    view.selectedTraceNode !== null && trace !== null
      ? focusHighlight(strategy, trace, view.selectedTraceNode)
      : null;

  return {
    runId: record?.id ?? null,
    status: record?.status ?? null,
    groups,
    focus,
  };
}
