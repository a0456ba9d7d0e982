/**
 * Agent board view: one card per agent on the board. When a task has
 * focus, its team floats to the top of the board and each elevated card
 * aggregates the actions that agent performs in the focused task.
 */

import { INTERACTION_COLORS } from "../colors";
import type { ViewState } from "../state";
import type { InteractionType, StrategyDoc } from "../types";

export interface AggregatedAction {
  actionIndex: number;
  instruction: string;
  interactionType: InteractionType;
  color: string;
}

export interface AgentCard {
  /** Backend agent id. */
  id: string;
  name: string;
  profile: string;
  /** Initials rendered as the card avatar, derived from the agent name. */
  avatarInitials: string;
  /** True when the agent belongs to the focused task's team. */
  elevated: boolean;
  /** The focused task's actions assigned to this agent, in process order. */
  actions: AggregatedAction[];
}

export interface AgentBoardView {
  focusedTaskId: string | null;
  cards: AgentCard[];
}

function initialsOf(name: string): string {
  return name
    .split(/\s+/)
    .filter((word) => word.length > 0)
    .slice(0, 2)
    .map((word) => (word[0] as string).toUpperCase())
    .join("");
}

/**
 * Project the agent board. Without focus, cards keep board order. With a
 * focused task, its team leads (in team order, with aggregated actions)
 * and the remaining agents follow in board order.
 */
export function renderAgentBoard(strategy: StrategyDoc, view: ViewState): AgentBoardView {
  const focusedTask = strategy.tasks.find((task) => task.id === view.focusedTaskId) ?? null;
  const team = focusedTask === null ? [] : focusedTask.team;

  const cardFor = (agentId: string): AgentCard | null => {
    const agent = strategy.agentBoard.agents.find((a) => a.id === agentId);
    if (agent === undefined) {
      return null;
    }
    const elevated = team.includes(agent.id);
    const actions: AggregatedAction[] = [];
    if (elevated && focusedTask !== null) {
      focusedTask.process.forEach((action, index) => {
        if (action.agentId === agent.id) {
          actions.push({
            actionIndex: index,
            instruction: action.instruction,
            interactionType: action.interactionType,
            color: INTERACTION_COLORS[action.interactionType],
          });
        }
      });
    }
    return {
      id: agent.id,
      name: agent.name,
      profile: agent.profile,
      avatarInitials: initialsOf(agent.name),
      elevated,
      actions,
    };
  };

  const cards: AgentCard[] = [];
  for (const agentId of team) {
    const card = cardFor(agentId);
    if (card !== null) {
      cards.push(card);
    }
  }
  for (const agent of strategy.agentBoard.agents) {
    if (!team.includes(agent.id)) {
      const card = cardFor(agent.id);
      if (card !== null) {
        cards.push(card);
      }
    }
  }

  return { focusedTaskId: focusedTask === null ? null : focusedTask.id, cards };
}
