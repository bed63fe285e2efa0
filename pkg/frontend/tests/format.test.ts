import { describe, expect, it } from "vitest";

import { barWidths, formatScore, regionSummary } from "../src/format.js";

describe("formatScore", () => {
  it("uses one decimal for double-digit percents", () => {
    expect(formatScore(0.256)).toBe("25.6%");
    expect(formatScore(0.995)).toBe("99.5%");
  });

  it("uses two decimals for single-digit percents", () => {
    expect(formatScore(0.0256)).toBe("2.56%");
  });

  it("uses three decimals below one percent", () => {
    expect(formatScore(0.00256)).toBe("0.256%");
    expect(formatScore(0)).toBe("0.000%");
  });

  it("shows a dash for scores it cannot display", () => {
    expect(formatScore(Number.NaN)).toBe("–");
    expect(formatScore(Number.POSITIVE_INFINITY)).toBe("–");
    expect(formatScore(-0.01)).toBe("–");
  });
});

describe("barWidths", () => {
  it("fills the track for the top label and scales the rest", () => {
    expect(barWidths([
      { label: "a", score: 0.4 },
      { label: "b", score: 0.2 },
      { label: "c", score: 0.1 },
    ])).toEqual([100, 50, 25]);
  });

  it("returns no widths for no labels", () => {
    expect(barWidths([])).toEqual([]);
  });

  it("collapses every bar when the top score is zero", () => {
    expect(barWidths([
      { label: "a", score: 0 },
      { label: "b", score: 0 },
    ])).toEqual([0, 0]);
  });

  it("collapses every bar when the top score is not finite", () => {
    expect(barWidths([
      { label: "a", score: Number.NaN },
      { label: "b", score: 0.5 },
    ])).toEqual([0, 0]);
  });

  it("clamps stray scores into the track", () => {
    // defensive: the service ranks descending, but a malformed payload
    // must not overflow the track or render negative widths
    expect(barWidths([
      { label: "a", score: 0.2 },
      { label: "b", score: 0.4 },
      { label: "c", score: -0.1 },
    ])).toEqual([100, 100, 0]);
  });
});

describe("regionSummary", () => {
  it("pluralizes the counter", () => {
    expect(regionSummary(0)).toBe("0 regions painted");
    expect(regionSummary(1)).toBe("1 region painted");
    expect(regionSummary(2)).toBe("2 regions painted");
  });
});
