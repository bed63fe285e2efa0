/** Drawing-plane geometry: unit-square points on a named body side. */

export type Side = "front" | "back";

export interface DrawingPoint {
  side: Side;
  x: number;
  y: number;
}

export const clamp01 = (v: number): number => Math.min(1, Math.max(0, v));

export function distance(a: DrawingPoint, b: DrawingPoint): number {
  return Math.hypot(a.x - b.x, a.y - b.y);
}

/**
 * Thin a raw pointer trail to samples at least `radius / 2` apart.
 *
 * The first point always survives; every later point is kept only if it
 * sits far enough from the previously kept one, so a slow wiggle and a
 * fast flick of the same path produce near-identical payloads. Points
 * are clamped into the unit square; samples from another side are
 * rejected because one stroke cannot span silhouettes.
 */
export function resampleStroke(trail: DrawingPoint[], radius: number): DrawingPoint[] {
  if (radius <= 0) throw new Error("brush radius must be positive");
  const kept: DrawingPoint[] = [];
  const spacing = radius / 2;
  for (const raw of trail) {
    if (kept.length > 0 && raw.side !== kept[0].side) {
      throw new Error("a stroke cannot cross body sides");
    }
    const p: DrawingPoint = { side: raw.side, x: clamp01(raw.x), y: clamp01(raw.y) };
    if (kept.length === 0 || distance(p, kept[kept.length - 1]) >= spacing) {
      kept.push(p);
    }
  }
  return kept;
}

/** Points of `all` that survive erasing a disc on one side. */
export function eraseWithin(
  all: DrawingPoint[],
  center: DrawingPoint,
  radius: number,
): DrawingPoint[] {
  if (radius <= 0) throw new Error("erase radius must be positive");
  return all.filter((p) => p.side !== center.side || distance(p, center) > radius);
}
