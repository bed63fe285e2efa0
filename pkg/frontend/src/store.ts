/** Undoable container for the painted points. */

import { DrawingPoint, eraseWithin, resampleStroke } from "./geometry.js";

const HISTORY_LIMIT = 100;

export class DrawingStore {
  private current: DrawingPoint[] = [];
  private history: DrawingPoint[][] = [];
  private sessionOpen = false;
  private sessionRecorded = false;

  get points(): readonly DrawingPoint[] {
    return this.current;
  }

  get isEmpty(): boolean {
    return this.current.length === 0;
  }

  get canUndo(): boolean {
    return this.history.length > 0;
  }

  /** Resample a finished stroke and append it as one undoable step. */
  commitStroke(trail: DrawingPoint[], radius: number): number {
    const sampled = resampleStroke(trail, radius);
    if (sampled.length === 0) return 0;
    this.push();
    this.current = this.current.concat(sampled);
    return sampled.length;
  }

  /** Erase around a point as one undoable step; no-op commits nothing. */
  commitErase(center: DrawingPoint, radius: number): number {
    this.beginErase();
    const removed = this.eraseAt(center, radius);
    this.endErase();
    return removed;
  }

  /**
   * Erase-drag session: any number of eraseAt calls collapse into a
   * single undo step, and a drag that removes nothing records nothing.
   */
  beginErase(): void {
    this.sessionOpen = true;
    this.sessionRecorded = false;
  }

  eraseAt(center: DrawingPoint, radius: number): number {
    const kept = eraseWithin(this.current, center, radius);
    const removed = this.current.length - kept.length;
    if (removed === 0) return 0;
    if (!this.sessionOpen || !this.sessionRecorded) {
      this.push();
      this.sessionRecorded = true;
    }
    this.current = kept;
    return removed;
  }

  endErase(): void {
    this.sessionOpen = false;
    this.sessionRecorded = false;
  }

  /** Drop everything as one undoable step. */
  clear(): void {
    if (this.current.length === 0) return;
    this.push();
    this.current = [];
  }

  undo(): boolean {
    const prev = this.history.pop();
    if (prev === undefined) return false;
    this.current = prev;
    return true;
  }

  private push(): void {
    this.history.push(this.current.slice());
    if (this.history.length > HISTORY_LIMIT) this.history.shift();
  }
}
