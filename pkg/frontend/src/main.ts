/** DOM wiring: canvases, toolbar, result panels. Logic lives in the
 * imported modules; keep this layer declarative and thin. */

import { ApiClient, FetchLike, ModelInfo, PredictResponse, ViewResult } from "./api.js";
import { formatScore, barWidths, regionSummary } from "./format.js";
import { clamp01, DrawingPoint, Side } from "./geometry.js";
import { BODY_OUTLINE, HEAD } from "./silhouettes.js";
import { DrawingStore } from "./store.js";

const BRUSH_RADIUS_DEFAULT = 0.03;

const store = new DrawingStore();
const api = new ApiClient(window.fetch.bind(window) as FetchLike);

type Mode = "paint" | "erase";
let mode: Mode = "paint";
let brushRadius = BRUSH_RADIUS_DEFAULT;
let trail: DrawingPoint[] = [];
let painting = false;
let erasing = false;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const banner = $("banner");
const modelLine = $("model-line");
const predictBtn = $<HTMLButtonElement>("predict");
const predictHint = $("predict-hint");
const undoBtn = $<HTMLButtonElement>("undo");
const clearBtn = $<HTMLButtonElement>("clear");
const paintBtn = $<HTMLButtonElement>("mode-paint");
const eraseBtn = $<HTMLButtonElement>("mode-erase");
const radiusInput = $<HTMLInputElement>("radius");
const autoPredict = $<HTMLInputElement>("auto-predict");
const regionsLine = $("regions-line");
const panels = $("panels");

const canvases: Record<Side, HTMLCanvasElement> = {
  front: $<HTMLCanvasElement>("canvas-front"),
  back: $<HTMLCanvasElement>("canvas-back"),
};

function showError(message: string): void {
  banner.textContent = message;
  banner.classList.remove("hidden");
}

function clearError(): void {
  banner.classList.add("hidden");
}

function canvasPoint(canvas: HTMLCanvasElement, side: Side, ev: PointerEvent): DrawingPoint {
  const rect = canvas.getBoundingClientRect();
  return {
    side,
    x: clamp01((ev.clientX - rect.left) / rect.width),
    y: clamp01((ev.clientY - rect.top) / rect.height),
  };
}

function drawSilhouette(ctx: CanvasRenderingContext2D, w: number, h: number): void {
  ctx.beginPath();
  BODY_OUTLINE.forEach(([x, y], i) => {
    if (i === 0) ctx.moveTo(x * w, y * h);
    else ctx.lineTo(x * w, y * h);
  });
  ctx.closePath();
  ctx.moveTo((HEAD.cx + HEAD.r) * w, HEAD.cy * h);
  ctx.arc(HEAD.cx * w, HEAD.cy * h, HEAD.r * w, 0, Math.PI * 2);
  ctx.fillStyle = "#e8e3da";
  ctx.fill();
  ctx.strokeStyle = "#8d8575";
  ctx.lineWidth = 1.5;
  ctx.stroke();
}

function render(): void {
  for (const side of ["front", "back"] as Side[]) {
    const canvas = canvases[side];
    const dpr = window.devicePixelRatio || 1;
    const rect = canvas.getBoundingClientRect();
    canvas.width = Math.round(rect.width * dpr);
    canvas.height = Math.round(rect.height * dpr);
    const ctx = canvas.getContext("2d");
    if (!ctx) continue;
    ctx.scale(dpr, dpr);
    const w = rect.width;
    const h = rect.height;
    ctx.clearRect(0, 0, w, h);
    drawSilhouette(ctx, w, h);
    ctx.fillStyle = "rgba(205, 55, 55, 0.55)";
    const dots = painting && trail.length > 0 && trail[0].side === side
      ? store.points.concat(trail)
      : store.points;
    for (const p of dots) {
      if (p.side !== side) continue;
      ctx.beginPath();
      ctx.arc(p.x * w, p.y * h, brushRadius * w, 0, Math.PI * 2);
      ctx.fill();
    }
  }
  syncControls();
}

function syncControls(): void {
  predictBtn.disabled = store.isEmpty;
  predictHint.classList.toggle("hidden", !store.isEmpty);
  undoBtn.disabled = !store.canUndo;
  clearBtn.disabled = store.isEmpty;
  paintBtn.classList.toggle("active", mode === "paint");
  eraseBtn.classList.toggle("active", mode === "erase");
}

function renderViewPanel(view: ViewResult): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel";
  const title = document.createElement("h3");
  title.textContent = view.name.charAt(0).toUpperCase() + view.name.slice(1);
  panel.appendChild(title);
  const meta = document.createElement("p");
  meta.className = "panel-meta";
  meta.textContent = `top ${view.n} label${view.n === 1 ? "" : "s"}`;
  panel.appendChild(meta);
  const list = document.createElement("ol");
  const widths = barWidths(view.labels);
  view.labels.forEach((item, i) => {
    const row = document.createElement("li");
    const name = document.createElement("span");
    name.className = "label-name";
    name.textContent = item.label;
    const track = document.createElement("span");
    track.className = "bar-track";
    const bar = document.createElement("span");
    bar.className = "bar-fill";
    bar.style.width = `${widths[i]}%`;
    track.appendChild(bar);
    const score = document.createElement("span");
    score.className = "label-score";
    score.textContent = formatScore(item.score);
    row.append(name, track, score);
    list.appendChild(row);
  });
  panel.appendChild(list);
  return panel;
}

function renderResults(response: PredictResponse): void {
  regionsLine.textContent = regionSummary(response.regions);
  panels.replaceChildren(...response.views.map(renderViewPanel));
}

async function requestPredict(): Promise<void> {
  if (store.isEmpty) return;
  clearError();
  predictBtn.classList.add("busy");
  const outcome = await api.predict(store.points);
  predictBtn.classList.remove("busy");
  if (outcome.kind === "ok") renderResults(outcome.response);
  else if (outcome.kind === "error") showError(outcome.message);
  // stale outcomes are dropped: a newer request owns the panels
}

function attachCanvas(side: Side): void {
  const canvas = canvases[side];
  canvas.addEventListener("pointerdown", (ev) => {
    if (!ev.isPrimary) return;
    canvas.setPointerCapture(ev.pointerId);
    const p = canvasPoint(canvas, side, ev);
    if (mode === "paint") {
      painting = true;
      trail = [p];
    } else {
      erasing = true;
      store.beginErase();
      store.eraseAt(p, brushRadius * 1.5);
    }
    render();
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!painting && !erasing) return;
    const p = canvasPoint(canvas, side, ev);
    if (painting) trail.push(p);
    else store.eraseAt(p, brushRadius * 1.5);
    render();
  });
  const finish = () => {
    if (painting) {
      painting = false;
      store.commitStroke(trail, brushRadius);
      trail = [];
    } else if (erasing) {
      erasing = false;
      store.endErase();
    } else {
      return;
    }
    render();
    if (autoPredict.checked && !store.isEmpty) void requestPredict();
  };
  canvas.addEventListener("pointerup", finish);
  canvas.addEventListener("pointercancel", finish);
}

function attachToolbar(): void {
  paintBtn.addEventListener("click", () => {
    mode = "paint";
    syncControls();
  });
  eraseBtn.addEventListener("click", () => {
    mode = "erase";
    syncControls();
  });
  radiusInput.addEventListener("input", () => {
    brushRadius = Number(radiusInput.value);
    render();
  });
  undoBtn.addEventListener("click", () => {
    store.undo();
    render();
  });
  clearBtn.addEventListener("click", () => {
    store.clear();
    render();
  });
  predictBtn.addEventListener("click", () => void requestPredict());
  window.addEventListener("resize", render);
}

function describeModel(info: ModelInfo): string {
  const priv = info.private_topics.join("/");
  return `${info.n_topics} shared topics, ${priv} private; views: ${info.view_names.join(", ")}`;
}

async function boot(): Promise<void> {
  attachCanvas("front");
  attachCanvas("back");
  attachToolbar();
  radiusInput.value = String(brushRadius);
  render();
  try {
    modelLine.textContent = describeModel(await api.fetchModel());
  } catch (err) {
    showError(
      `service unreachable: ${err instanceof Error ? err.message : String(err)}`,
    );
    modelLine.textContent = "model unavailable";
  }
}

void boot();
