/**
 * The single source of truth for every color the views use. Projection
 * functions never invent hues of their own; they look them up here so the
 * palette stays consistent across views.
 */

import type { InteractionType } from "./types";

/**
 * One color per interaction type, and nothing else. The table has exactly
 * four entries because the model defines exactly four cooperative roles.
 */
export const INTERACTION_COLORS: Readonly<Record<InteractionType, string>> = {
  propose: "#4e79a7",
  critique: "#e15759",
  improve: "#b07aa1",
  finalize: "#76b7b2",
};

/** Edges and chips for key objects flowing into a task. */
export const INPUT_COLOR = "#59a14f";

/** Edges and chips for the key object a task produces. */
export const OUTPUT_COLOR = "#f28e2b";

/** Background for agent and task-content mentions in template summaries. */
export const NEUTRAL_CHIP_COLOR = "#e0e0e0";

/** Background tint applied to elements highlighted by cross-view focus. */
export const HIGHLIGHT_COLOR = "#fff3b0";

/**
 * Sequential five-step ramp for capability scores 1 through 5, light to
 * dark so higher scores read as more saturated cells.
 */
export const SCORE_RAMP: readonly string[] = [
  "#eff3ff",
  "#bdd7e7",
  "#6baed6",
  "#3182bd",
  "#08519c",
];

/**
 * Map a 1-5 capability score onto the sequential ramp. Out-of-range values
 * clamp to the nearest end so a malformed score still renders.
 */
export function scoreColor(score: number): string {
  const index = Math.min(SCORE_RAMP.length, Math.max(1, Math.round(score))) - 1;
  return SCORE_RAMP[index] as string;
}

/**
 * Text color that stays legible on top of a ramp cell: dark ink on the
 * light half of the ramp, white on the dark half.
 */
export function scoreNumeralColor(score: number): string {
  return Math.round(score) >= 4 ? "#ffffff" : "#1a1a1a";
}
