/**
 * Plan outline view: a bipartite graph with key objects in one column and
 * tasks in the other. Edges show the flow of artifacts, green into a task
 * and orange out of it. The projection is a pure function of the fetched
 * strategy plus ViewState; every node carries the backend id it renders.
 */

import { INPUT_COLOR, OUTPUT_COLOR } from "../colors";
import type { ViewState } from "../state";
import type { StrategyDoc } from "../types";

export interface OutlineNode {
  /** Backend id: the key object id or the task id. */
  id: string;
  kind: "keyObject" | "task";
  label: string;
  /** Column of the bipartite layout: 0 for key objects, 1 for tasks. */
  column: 0 | 1;
  focused: boolean;
  /** Clicking a task node opens its editing panel and sets the focus. */
  click: { type: "focus-task"; taskId: string } | null;
}

export interface OutlineEdge {
  source: string;
  target: string;
  role: "input" | "output";
  color: string;
}

export interface PlanOutlineView {
  goal: string;
  nodes: OutlineNode[];
  edges: OutlineEdge[];
  /** The branch button that opens a plan exploration session. */
  branchControl: { type: "open-session"; kind: "planOutline" };
}

/** Project the strategy's plan onto the bipartite outline graph. */
export function renderPlanOutline(strategy: StrategyDoc, view: ViewState): PlanOutlineView {
  const nodes: OutlineNode[] = [];
  for (const keyObject of strategy.keyObjects) {
    nodes.push({
      id: keyObject.id,
      kind: "keyObject",
      label: keyObject.name,
      column: 0,
      focused: false,
      click: null,
    });
  }
  for (const task of strategy.tasks) {
    nodes.push({
      id: task.id,
      kind: "task",
      label: task.stepName,
      column: 1,
      focused: view.focusedTaskId === task.id,
      click: { type: "focus-task", taskId: task.id },
    });
  }

  const edges: OutlineEdge[] = [];
  for (const task of strategy.tasks) {
    for (const objectId of task.inputObjectIds) {
      edges.push({ source: objectId, target: task.id, role: "input", color: INPUT_COLOR });
    }
    edges.push({
      source: task.id,
      target: task.outputObjectId,
      role: "output",
      color: OUTPUT_COLOR,
    });
  }

  return {
    goal: strategy.goal,
    nodes,
    edges,
    branchControl: { type: "open-session", kind: "planOutline" },
  };
}
