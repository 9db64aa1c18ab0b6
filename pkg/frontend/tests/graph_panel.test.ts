import { afterEach, describe, expect, it } from "vitest";

import { applyTimeCursor, highlightChosen, renderGraph, wireTimeSlider } from "../src/panels/graph.js";
import { visibleAt } from "../src/time_filter.js";
import { FIXTURE_GRAPH, LATEST_CONTACT_RESULT } from "./helpers.js";

afterEach(() => {
  document.body.innerHTML = "";
});

function container(): HTMLElement {
  const el = document.createElement("div");
  document.body.appendChild(el);
  return el;
}

describe("graph explorer", () => {
  it("renders an empty-state message for an empty graph", () => {
    const el = container();
    renderGraph(el, { ...FIXTURE_GRAPH, nodes: [], edges: [] });
    expect(el.querySelector(".empty-state")?.textContent).toContain("empty");
    expect(el.querySelector("svg")).toBeNull();
  });

  it("renders every node and edge of the fixture", () => {
    const el = container();
    renderGraph(el, FIXTURE_GRAPH);
    expect(el.querySelectorAll(".graph-node").length).toBe(3);
    expect(el.querySelectorAll(".graph-edge").length).toBe(2);
    const labels = [...el.querySelectorAll(".graph-edge text")].map((t) => t.textContent);
    expect(labels).toContain("contacts [70,80]");
  });

  it("highlights exactly the chosen edge ids and dims the rest", () => {
    const el = container();
    renderGraph(el, FIXTURE_GRAPH);
    highlightChosen(el, LATEST_CONTACT_RESULT.trace.chosen_ids);
    const winner = el.querySelector('[data-edge-id="e2"]')!;
    const loser = el.querySelector('[data-edge-id="e1"]')!;
    expect(winner.classList.contains("chosen")).toBe(true);
    expect(winner.classList.contains("dimmed")).toBe(false);
    expect(loser.classList.contains("chosen")).toBe(false);
    expect(loser.classList.contains("dimmed")).toBe(true);
  });

  it("time cursor hides exactly the elements outside their intervals", () => {
    const el = container();
    renderGraph(el, FIXTURE_GRAPH);
    for (const cursor of [0, 40, 46, 60, 75, 90]) {
      applyTimeCursor(el, FIXTURE_GRAPH, cursor);
      const subset = visibleAt(FIXTURE_GRAPH, cursor);
      el.querySelectorAll(".graph-node").forEach((node) => {
        const id = node.getAttribute("data-node-id")!;
        expect(node.classList.contains("hidden-at-cursor")).toBe(!subset.nodeIds.has(id));
      });
      el.querySelectorAll(".graph-edge").forEach((edge) => {
        const id = edge.getAttribute("data-edge-id")!;
        expect(edge.classList.contains("hidden-at-cursor")).toBe(!subset.edgeIds.has(id));
      });
    }
  });

  it("slider spans the node frame extent and filters on input", () => {
    const el = container();
    renderGraph(el, FIXTURE_GRAPH);
    const slider = document.createElement("input");
    slider.type = "range";
    document.body.appendChild(slider);
    wireTimeSlider(slider, el, FIXTURE_GRAPH);
    expect([slider.min, slider.max]).toEqual(["0", "90"]);
    slider.value = "45";
    slider.dispatchEvent(new Event("input"));
    expect(
      el.querySelector('[data-edge-id="e2"]')!.classList.contains("hidden-at-cursor"),
    ).toBe(true);
    expect(
      el.querySelector('[data-edge-id="e1"]')!.classList.contains("hidden-at-cursor"),
    ).toBe(false);
  });
});
