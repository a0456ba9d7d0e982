/**
 * Task process view: one card per task. The collapsed face is a template
 * summary whose crucial elements are accentuated (inputs green, output
 * orange, agents and task content on neutral chips). Expanding a card
 * reveals the action sequence color-coded by interaction type, with every
 * instruction editable in place.
 */

import {
  INPUT_COLOR,
  INTERACTION_COLORS,
  NEUTRAL_CHIP_COLOR,
  OUTPUT_COLOR,
} from "../colors";
import type { ViewState } from "../state";
import type { InteractionType, StrategyDoc, TaskDoc } from "../types";

export type SegmentRole = "plain" | "agent" | "content" | "inputObject" | "outputObject";

export interface TemplateSegment {
  text: string;
  role: SegmentRole;
  /** Backend id of the referenced element; null for connective text. */
  refId: string | null;
  /** Chip background, or null for unstyled prose. */
  color: string | null;
}

export interface ActionInputChip {
  label: string;
  /** Trace-compatible id: a key object id or "action:{taskId}:{index}". */
  refId: string;
  color: string;
}

export interface ProcessActionRow {
  actionIndex: number;
  agentId: string;
  agentName: string;
  instruction: string;
  interactionType: InteractionType;
  color: string;
  inputs: ActionInputChip[];
  /** In-place edit descriptor for the instruction text. */
  edit: { field: "instruction"; taskId: string; actionIndex: number };
}

export interface TaskProcessCard {
  taskId: string;
  stepName: string;
  summary: TemplateSegment[];
  expanded: boolean;
  actions: ProcessActionRow[];
}

export interface TaskProcessView {
  cards: TaskProcessCard[];
}

function summarize(strategy: StrategyDoc, task: TaskDoc): TemplateSegment[] {
  const objectName = (objectId: string): string =>
    strategy.keyObjects.find((ko) => ko.id === objectId)?.name ?? objectId;
  const agentName = (agentId: string): string =>
    strategy.agentBoard.agents.find((a) => a.id === agentId)?.name ?? agentId;

  const segments: TemplateSegment[] = [];
  if (task.team.length > 0) {
    segments.push({ text: "Team", role: "plain", refId: null, color: null });
    for (const agentId of task.team) {
      segments.push({
        text: agentName(agentId),
        role: "agent",
        refId: agentId,
        color: NEUTRAL_CHIP_COLOR,
      });
    }
    segments.push({ text: "works on", role: "plain", refId: null, color: null });
  } else {
    segments.push({ text: "Unstaffed task", role: "plain", refId: null, color: null });
  }
  segments.push({
    text: task.taskContent,
    role: "content",
    refId: task.id,
    color: NEUTRAL_CHIP_COLOR,
  });
  if (task.inputObjectIds.length > 0) {
    segments.push({ text: "reading", role: "plain", refId: null, color: null });
    for (const objectId of task.inputObjectIds) {
      segments.push({
        text: objectName(objectId),
        role: "inputObject",
        refId: objectId,
        color: INPUT_COLOR,
      });
    }
  }
  segments.push({ text: "to produce", role: "plain", refId: null, color: null });
  segments.push({
    text: objectName(task.outputObjectId),
    role: "outputObject",
    refId: task.outputObjectId,
    color: OUTPUT_COLOR,
  });
  return segments;
}

/** Project every task onto its process card, expanding the focused one. */
export function renderTaskProcess(strategy: StrategyDoc, view: ViewState): TaskProcessView {
  const objectName = (objectId: string): string =>
    strategy.keyObjects.find((ko) => ko.id === objectId)?.name ?? objectId;
  const agentName = (agentId: string): string =>
    strategy.agentBoard.agents.find((a) => a.id === agentId)?.name ?? agentId;

  const cards = strategy.tasks.map((task): TaskProcessCard => {
    const actions = task.process.map((action, index): ProcessActionRow => {
      const inputs = action.importantInputs.map((ref): ActionInputChip => {
        if (ref.kind === "keyObject") {
          return { label: objectName(ref.keyObjectId), refId: ref.keyObjectId, color: INPUT_COLOR };
        }
        const earlier = task.process[ref.actionIndex];
        const earlierKind = earlier === undefined ? "action" : earlier.interactionType;
        return {
          label: `${earlierKind} result ${ref.actionIndex + 1}`,
          refId: `action:${task.id}:${ref.actionIndex}`,
          color: NEUTRAL_CHIP_COLOR,
        };
      });
      return {
        actionIndex: index,
        agentId: action.agentId,
        agentName: agentName(action.agentId),
        instruction: action.instruction,
        interactionType: action.interactionType,
        color: INTERACTION_COLORS[action.interactionType],
        inputs,
        edit: { field: "instruction", taskId: task.id, actionIndex: index },
      };
    });
    return {
      taskId: task.id,
      stepName: task.stepName,
      summary: summarize(strategy, task),
      expanded: view.focusedTaskId === task.id,
      actions,
    };
  });

  return { cards };
}
