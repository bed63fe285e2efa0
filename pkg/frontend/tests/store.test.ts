import { describe, expect, it } from "vitest";

import { DrawingPoint } from "../src/geometry.js";
import { DrawingStore } from "../src/store.js";

const fp = (x: number, y: number): DrawingPoint => ({ side: "front", x, y });

describe("DrawingStore", () => {
  it("starts empty with nothing to undo", () => {
    const store = new DrawingStore();
    expect(store.isEmpty).toBe(true);
    expect(store.canUndo).toBe(false);
    expect(store.undo()).toBe(false);
  });

  it("commits a resampled stroke as one undo step", () => {
    const store = new DrawingStore();
    const added = store.commitStroke([fp(0.2, 0.2), fp(0.201, 0.2), fp(0.3, 0.2)], 0.04);
    expect(added).toBe(2); // middle point thinned away
    expect(store.points).toHaveLength(2);
    expect(store.undo()).toBe(true);
    expect(store.isEmpty).toBe(true);
  });

  it("ignores a stroke that resamples to nothing", () => {
    const store = new DrawingStore();
    expect(store.commitStroke([], 0.04)).toBe(0);
    expect(store.canUndo).toBe(false);
  });

  it("pops strokes atomically in reverse order", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.1, 0.1)], 0.03);
    store.commitStroke([fp(0.5, 0.5), fp(0.6, 0.5)], 0.03);
    expect(store.points).toHaveLength(3);
    store.undo();
    expect(store.points.map((p) => p.x)).toEqual([0.1]);
    store.undo();
    expect(store.isEmpty).toBe(true);
  });

  it("erase removes points and undoes as one step", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.2, 0.2), fp(0.8, 0.8)], 0.03);
    const removed = store.commitErase(fp(0.2, 0.2), 0.05);
    expect(removed).toBe(1);
    expect(store.points.map((p) => p.x)).toEqual([0.8]);
    store.undo();
    expect(store.points).toHaveLength(2);
  });

  it("an erase that touches nothing records no undo step", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.2, 0.2)], 0.03);
    expect(store.commitErase(fp(0.9, 0.9), 0.03)).toBe(0);
    store.undo();
    expect(store.isEmpty).toBe(true); // the only step was the stroke
  });

  it("a whole erase drag is a single undo step", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.2, 0.2), fp(0.5, 0.5), fp(0.8, 0.8)], 0.03);
    store.beginErase();
    expect(store.eraseAt(fp(0.2, 0.2), 0.05)).toBe(1);
    expect(store.eraseAt(fp(0.3, 0.3), 0.05)).toBe(0);
    expect(store.eraseAt(fp(0.5, 0.5), 0.05)).toBe(1);
    store.endErase();
    expect(store.points).toHaveLength(1);
    store.undo();
    expect(store.points).toHaveLength(3);
  });

  it("clear empties the canvas and is undoable", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.4, 0.4)], 0.03);
    store.clear();
    expect(store.isEmpty).toBe(true);
    store.undo();
    expect(store.points).toHaveLength(1);
  });

  it("clearing an empty canvas records nothing", () => {
    const store = new DrawingStore();
    store.clear();
    expect(store.canUndo).toBe(false);
  });

  it("undo does not leak mutations into stored history", () => {
    const store = new DrawingStore();
    store.commitStroke([fp(0.1, 0.1)], 0.03);
    store.commitStroke([fp(0.9, 0.9)], 0.03);
    store.undo();
    store.commitStroke([fp(0.5, 0.5)], 0.03);
    store.undo();
    expect(store.points.map((p) => p.x)).toEqual([0.1]);
  });
});
