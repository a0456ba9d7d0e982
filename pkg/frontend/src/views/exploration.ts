/**
 * Exploration view: the branch forest shared by all session kinds, plus
 * the scoring panel that assignment sessions add. The forest shows parent
 * links, flags the active baseline, and exposes the spawn controls
 * (requirement entry, branch count, adopt) anchored at that baseline. The
 * scoring panel projects the capability matrix onto a heatmap whose cells
 * carry both the numeral and the rationale behind the score, and the rank
 * rows partitioned into assigned and unassigned blocks.
 */

import { scoreColor, scoreNumeralColor } from "../colors";
import type {
  BoardDoc,
  BranchRequestDoc,
  RankResponseDoc,
  SessionDoc,
  SessionKind,
} from "../types";

export interface BranchNodeView {
  /** Backend node id within the session. */
  id: string;
  parentId: string | null;
  isBaseline: boolean;
  createdAt: number;
  /** One-line description of the variant held by this node. */
  summary: string;
  /** The requirement text that produced this node, when it was spawned. */
  requirement: string | null;
  baselineControl: { type: "set-baseline"; sessionId: string; nodeId: string };
  adoptControl: { type: "adopt-node"; sessionId: string; nodeId: string };
}

export interface SpawnControls {
  /** New branches attach under this node (the active baseline). */
  anchorNodeId: string;
  requirementEntry: { placeholder: string };
  countSelector: { value: number; options: number[] };
  spawnAction: { type: "spawn-branches"; sessionId: string };
}

export interface HeatmapCellView {
  aspect: string;
  score: number;
  /** The numeral drawn over the cell so exact values stay readable. */
  numeral: string;
  color: string;
  textColor: string;
  /** Scoring rationale surfaced on hover, verbatim from the service. */
  rationale: string;
}

export interface HeatmapRowView {
  agentId: string;
  agentName: string;
  assigned: boolean;
  cells: HeatmapCellView[];
}

export interface AspectControl {
  name: string;
  source: "llm" | "user";
  selected: boolean;
  toggle: { type: "toggle-aspect"; sessionId: string; name: string };
}

export interface RankingEntryView {
  agentId: string;
  name: string;
  mean: number;
}

export interface AssignmentPanel {
  taskId: string | null;
  heatmap: { columns: string[]; rows: HeatmapRowView[] };
  aspectControls: {
    entries: AspectControl[];
    addEntry: { type: "add-aspect"; sessionId: string };
  };
  ranking: { assigned: RankingEntryView[]; unassigned: RankingEntryView[] };
}

export interface ExplorationView {
  sessionId: string;
  kind: SessionKind;
  forest: BranchNodeView[];
  spawnControls: SpawnControls;
  /** Present only for assignment sessions. */
  assignment: AssignmentPanel | null;
}

const DEFAULT_BRANCH_COUNT = 3;

function summarizePayload(payload: unknown): string {
  if (typeof payload === "object" && payload !== null) {
    const doc = payload as Record<string, unknown>;
    if (Array.isArray(doc["tasks"])) {
      const steps = doc["tasks"]
        .map((task) => (task as Record<string, unknown>)["stepName"])
        .filter((name): name is string => typeof name === "string");
      return steps.join(" / ");
    }
    if (Array.isArray(doc["actions"])) {
      return `${doc["actions"].length} actions`;
    }
    if (Array.isArray(doc["team"])) {
      return `team of ${doc["team"].length}`;
    }
  }
  return "variant";
}

/**
 * Project an exploration session. Pass the agent board to label heatmap
 * rows and the latest rank response to fill the ranking panel; both are
 * optional so the forest can render before scoring has happened.
 */
export function renderExploration(
  session: SessionDoc,
  options: { board?: BoardDoc; rank?: RankResponseDoc | null } = {},
): ExplorationView {
  const forest = session.nodes.map((node): BranchNodeView => {
    const request: BranchRequestDoc | undefined = node.request;
    return {
      id: node.id,
      parentId: node.parentId,
      isBaseline: node.id === session.activeBaseline,
      createdAt: node.createdAt,
      summary: summarizePayload(session.payloads[node.payload]),
      requirement: request === undefined ? null : request.requirement,
      baselineControl: { type: "set-baseline", sessionId: session.id, nodeId: node.id },
      adoptControl: { type: "adopt-node", sessionId: session.id, nodeId: node.id },
    };
  });

  const spawnControls: SpawnControls = {
    anchorNodeId: session.activeBaseline,
    requirementEntry: { placeholder: "Describe how the new variants should differ" },
    countSelector: { value: DEFAULT_BRANCH_COUNT, options: [1, 2, 3, 4, 5] },
    spawnAction: { type: "spawn-branches", sessionId: session.id },
  };

  let assignment: AssignmentPanel | null = null;
  if (session.kind === "agentAssignment") {
    const matrix = session.matrix ?? null;
    const team = session.team ?? [];
    const agentName = (agentId: string): string =>
      options.board?.agents.find((a) => a.id === agentId)?.name ?? agentId;

    const columns = matrix === null ? [] : matrix.aspects;
    const rows =
      matrix === null
        ? []
        : matrix.rows.map((row): HeatmapRowView => {
            const cells = columns.map((aspect): HeatmapCellView => {
              const score = row.scores[aspect] ?? 0;
              return {
                aspect,
                score,
                numeral: String(score),
                color: scoreColor(score),
                textColor: scoreNumeralColor(score),
                rationale: row.rationales[aspect] ?? "",
              };
            });
            return {
              agentId: row.agentId,
              agentName: agentName(row.agentId),
              assigned: team.includes(row.agentId),
              cells,
            };
          });

    const aspectEntries = (session.aspects ?? []).map(
      (aspect): AspectControl => ({
        name: aspect.name,
        source: aspect.source,
        selected: aspect.selected,
        toggle: { type: "toggle-aspect", sessionId: session.id, name: aspect.name },
      }),
    );

    const rankRows = options.rank?.rows ?? [];
    const toEntry = (row: { agentId: string; name: string; mean: number }): RankingEntryView => ({
      agentId: row.agentId,
      name: row.name,
      mean: row.mean,
    });

    assignment = {
      taskId: session.taskId ?? null,
      heatmap: { columns, rows },
      aspectControls: {
        entries: aspectEntries,
        addEntry: { type: "add-aspect", sessionId: session.id },
      },
      ranking: {
        assigned: rankRows.filter((r) => r.partition === "assigned").map(toEntry),
        unassigned: rankRows.filter((r) => r.partition === "unassigned").map(toEntry),
      },
    };
  }

  return {
    sessionId: session.id,
    kind: session.kind,
    forest,
    spawnControls,
    assignment,
  };
}
