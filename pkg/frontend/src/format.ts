/** Presentation helpers for the ranked-label panels. */

import { RankedLabel } from "./api.js";

/** Score as a percent with enough digits to separate near ties. */
export function formatScore(score: number): string {
  if (!Number.isFinite(score) || score < 0) return "–";
  const pct = score * 100;
  if (pct >= 10) return `${pct.toFixed(1)}%`;
  if (pct >= 1) return `${pct.toFixed(2)}%`;
  return `${pct.toFixed(3)}%`;
}

/**
 * Bar widths in percent, scaled so the top label fills the track.
 * A zero or degenerate top score collapses every bar to zero.
 */
export function barWidths(labels: readonly RankedLabel[]): number[] {
  const top = labels.length > 0 ? labels[0].score : 0;
  if (!Number.isFinite(top) || top <= 0) return labels.map(() => 0);
  return labels.map((l) => Math.max(0, Math.min(100, (l.score / top) * 100)));
}

/** "3 regions painted" style counter. */
export function regionSummary(regions: number): string {
  return regions === 1 ? "1 region painted" : `${regions} regions painted`;
}
