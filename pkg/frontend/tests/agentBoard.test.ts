import { describe, expect, it } from "vitest";

import { INTERACTION_COLORS } from "../src/colors";
import { emptyViewState } from "../src/state";
import type { StrategyDoc } from "../src/types";
import { renderAgentBoard } from "../src/views/agentBoard";
import { loadFixture } from "./helpers";

const strategy = loadFixture<StrategyDoc>("strategy.json");

describe("renderAgentBoard", () => {
  it("shows every board agent in board order when nothing has focus", () => {
    const view = renderAgentBoard(strategy, emptyViewState());
    expect(view.focusedTaskId).toBeNull();
    expect(view.cards.map((c) => c.id)).toEqual(strategy.agentBoard.agents.map((a) => a.id));
    for (const card of view.cards) {
      expect(card.elevated).toBe(false);
      expect(card.actions).toEqual([]);
    }
  });

  it("carries name, profile, and derived avatar initials on each card", () => {
    const view = renderAgentBoard(strategy, emptyViewState());
    const writer = view.cards.find((c) => c.id === "agent-science-fiction-writer");
    expect(writer?.name).toBe("Science Fiction Writer");
    expect(writer?.profile).toContain("science fiction writer");
    expect(writer?.avatarInitials).toBe("SF");
  });

  it("elevates the focused task's team to the top in team order", () => {
    const task = strategy.tasks.find((t) => t.id === "task-plot-development");
    expect(task).toBeDefined();
    const view = renderAgentBoard(strategy, {
      ...emptyViewState(),
      focusedTaskId: "task-plot-development",
    });
    const teamSize = task?.team.length ?? 0;
    expect(view.cards.slice(0, teamSize).map((c) => c.id)).toEqual(task?.team);
    for (const card of view.cards.slice(0, teamSize)) {
      expect(card.elevated).toBe(true);
    }
    for (const card of view.cards.slice(teamSize)) {
      expect(card.elevated).toBe(false);
      expect(card.actions).toEqual([]);
    }
    expect(view.cards).toHaveLength(strategy.agentBoard.agents.length);
  });

  it("aggregates the focused task's actions onto the elevated cards", () => {
    const view = renderAgentBoard(strategy, {
      ...emptyViewState(),
      focusedTaskId: "task-plot-development",
    });
    const task = strategy.tasks.find((t) => t.id === "task-plot-development");
    for (const card of view.cards.filter((c) => c.elevated)) {
      const expected = (task?.process ?? [])
        .map((action, index) => ({ action, index }))
        .filter(({ action }) => action.agentId === card.id);
      expect(card.actions.map((a) => a.actionIndex)).toEqual(expected.map((e) => e.index));
      for (const aggregated of card.actions) {
        const source = task?.process[aggregated.actionIndex];
        expect(aggregated.instruction).toBe(source?.instruction);
        expect(aggregated.interactionType).toBe(source?.interactionType);
        expect(aggregated.color).toBe(INTERACTION_COLORS[aggregated.interactionType]);
      }
      expect(card.actions.length).toBeGreaterThan(0);
    }
  });

  it("keeps the non-elevated remainder in board order", () => {
    const view = renderAgentBoard(strategy, {
      ...emptyViewState(),
      focusedTaskId: "task-plot-development",
    });
    const team = strategy.tasks.find((t) => t.id === "task-plot-development")?.team ?? [];
    const rest = view.cards.filter((c) => !team.includes(c.id)).map((c) => c.id);
    const boardRest = strategy.agentBoard.agents
      .filter((a) => !team.includes(a.id))
      .map((a) => a.id);
    expect(rest).toEqual(boardRest);
  });
});
