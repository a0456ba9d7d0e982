import { describe, expect, it } from "vitest";

import {
  INPUT_COLOR,
  INTERACTION_COLORS,
  OUTPUT_COLOR,
  SCORE_RAMP,
  scoreColor,
  scoreNumeralColor,
} from "../src/colors";

describe("interaction color table", () => {
  it("has exactly four entries, one per interaction type", () => {
    expect(Object.keys(INTERACTION_COLORS).sort()).toEqual([
      "critique",
      "finalize",
      "improve",
      "propose",
    ]);
  });

  it("assigns four distinct hues", () => {
    const values = Object.values(INTERACTION_COLORS);
    expect(new Set(values).size).toBe(4);
  });

  it("does not reuse the input or output edge colors", () => {
    const values = new Set(Object.values(INTERACTION_COLORS));
    expect(values.has(INPUT_COLOR)).toBe(false);
    expect(values.has(OUTPUT_COLOR)).toBe(false);
  });
});

describe("input and output colors", () => {
  it("are distinct from each other", () => {
    expect(INPUT_COLOR).not.toBe(OUTPUT_COLOR);
  });
});

describe("score ramp", () => {
  it("has five distinct steps", () => {
    expect(SCORE_RAMP).toHaveLength(5);
    expect(new Set(SCORE_RAMP).size).toBe(5);
  });

  it("maps each score onto its own step", () => {
    for (let score = 1; score <= 5; score += 1) {
      expect(scoreColor(score)).toBe(SCORE_RAMP[score - 1]);
    }
  });

  it("clamps out-of-range scores to the ends of the ramp", () => {
    expect(scoreColor(0)).toBe(SCORE_RAMP[0]);
    expect(scoreColor(-3)).toBe(SCORE_RAMP[0]);
    expect(scoreColor(9)).toBe(SCORE_RAMP[4]);
  });

  it("switches numeral ink to white on the dark half of the ramp", () => {
    expect(scoreNumeralColor(1)).toBe(scoreNumeralColor(3));
    expect(scoreNumeralColor(5)).toBe(scoreNumeralColor(4));
    expect(scoreNumeralColor(1)).not.toBe(scoreNumeralColor(5));
  });
});
