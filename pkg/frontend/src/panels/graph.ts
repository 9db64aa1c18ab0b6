// Graph explorer: deterministic layered SVG rendering with a time slider.
// The visible subset at a cursor is exactly interval containment; query
// results highlight the chosen edge ids and dim everything else.

import { frameExtent, visibleAt } from "../time_filter.js";
import type { GraphSnapshot } from "../types.js";

const NODE_SPACING_X = 140;
const ROW_SPACING_Y = 90;
const NODE_RADIUS = 26;

interface LayoutPoint {
  x: number;
  y: number;
}

export function layoutNodes(snapshot: GraphSnapshot): Map<string, LayoutPoint> {
  const points = new Map<string, LayoutPoint>();
  const sorted = [...snapshot.nodes].sort((a, b) => a.id.localeCompare(b.id));
  const perRow = 4;
  sorted.forEach((node, i) => {
    points.set(node.id, {
      x: 60 + (i % perRow) * NODE_SPACING_X,
      y: 60 + Math.floor(i / perRow) * ROW_SPACING_Y,
    });
  });
  return points;
}

export function renderGraph(container: HTMLElement, snapshot: GraphSnapshot): void {
  container.innerHTML = "";
  if (snapshot.nodes.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "scene graph is empty - run SceneGen first";
    container.appendChild(empty);
    return;
  }
  const points = layoutNodes(snapshot);
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("class", "graph-canvas");
  svg.setAttribute("width", "620");
  svg.setAttribute("height", String(120 + Math.ceil(snapshot.nodes.length / 4) * ROW_SPACING_Y));

  for (const edge of snapshot.edges) {
    const from = points.get(edge.src);
    const to = points.get(edge.dst);
    if (!from || !to) continue;
    const group = document.createElementNS("http://www.w3.org/2000/svg", "g");
    group.setAttribute("class", "graph-edge");
    group.setAttribute("data-edge-id", edge.id);
    const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    group.appendChild(line);
    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", String((from.x + to.x) / 2));
    label.setAttribute("y", String((from.y + to.y) / 2 - 4));
    label.textContent = `${edge.relation} [${edge.t_start},${edge.t_end}]`;
    group.appendChild(label);
    svg.appendChild(group);
  }

  for (const node of snapshot.nodes) {
    const point = points.get(node.id)!;
    const group = document.createElementNS("http://www.w3.org/2000/svg", "g");
    group.setAttribute("class", "graph-node");
    group.setAttribute("data-node-id", node.id);
    const circle = document.createElementNS("http://www.w3.org/2000/svg", "circle");
    circle.setAttribute("cx", String(point.x));
    circle.setAttribute("cy", String(point.y));
    circle.setAttribute("r", String(NODE_RADIUS));
    group.appendChild(circle);
    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", String(point.x));
    label.setAttribute("y", String(point.y + NODE_RADIUS + 14));
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.id;
    group.appendChild(label);
    svg.appendChild(group);
  }
  container.appendChild(svg);
}

export function applyTimeCursor(
  container: HTMLElement,
  snapshot: GraphSnapshot,
  timeCursor: number,
): void {
  const visible = visibleAt(snapshot, timeCursor);
  container.querySelectorAll<Element>(".graph-node").forEach((el) => {
    const id = el.getAttribute("data-node-id") ?? "";
    el.classList.toggle("hidden-at-cursor", !visible.nodeIds.has(id));
  });
  container.querySelectorAll<Element>(".graph-edge").forEach((el) => {
    const id = el.getAttribute("data-edge-id") ?? "";
    el.classList.toggle("hidden-at-cursor", !visible.edgeIds.has(id));
  });
}

export function highlightChosen(container: HTMLElement, chosenIds: string[]): void {
  const chosen = new Set(chosenIds);
  container.querySelectorAll<Element>(".graph-edge").forEach((el) => {
    const id = el.getAttribute("data-edge-id") ?? "";
    el.classList.toggle("chosen", chosen.has(id));
    el.classList.toggle("dimmed", !chosen.has(id));
  });
}

export function wireTimeSlider(
  slider: HTMLInputElement,
  container: HTMLElement,
  snapshot: GraphSnapshot,
): void {
  const [lo, hi] = frameExtent(snapshot);
  slider.min = String(lo);
  slider.max = String(hi);
  slider.value = String(hi);
  slider.addEventListener("input", () => {
    applyTimeCursor(container, snapshot, Number(slider.value));
  });
  applyTimeCursor(container, snapshot, Number(slider.value));
}
