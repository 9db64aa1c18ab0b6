// Console wiring: one ConsoleSession at a time, panels share it.

import { ApiClient } from "./api.js";
import { renderApiError, wireSessionPanel } from "./panels/session.js";
import { wireAskPanel } from "./panels/ask.js";
import { applyTimeCursor, highlightChosen, renderGraph, wireTimeSlider } from "./panels/graph.js";
import { wireQueryPanel } from "./panels/query.js";
import { ConsoleSession } from "./state.js";

export function bootConsole(root: Document, baseUrl: string = ""): void {
  const api = new ApiClient(baseUrl);
  let session: ConsoleSession | null = null;

  const sessionPanel = root.getElementById("session-panel")!;
  const askPanel = root.getElementById("ask-panel")!;
  const graphPanel = root.getElementById("graph-panel")!;
  const graphCanvas = graphPanel.querySelector(".graph-container") as HTMLElement;
  const slider = graphPanel.querySelector("input[type=range]") as HTMLInputElement;
  const generateButton = graphPanel.querySelector("button.generate") as HTMLButtonElement;
  const queryPanel = root.getElementById("query-panel")!;

  wireSessionPanel(sessionPanel, api, (opened) => {
    session = opened;
  });

  wireAskPanel(askPanel, api, () => session);

  generateButton.addEventListener("click", async () => {
    if (!session) return;
    graphPanel.querySelectorAll(".error-banner").forEach((el) => el.remove());
    try {
      const result = await api.generateSceneGraph(session.sessionId);
      session.setGraph(result.graph);
      renderGraph(graphCanvas, result.graph);
      wireTimeSlider(slider, graphCanvas, result.graph);
      if (result.warnings.length > 0) {
        const note = document.createElement("p");
        note.className = "warnings";
        note.textContent = result.warnings.join("; ");
        graphPanel.appendChild(note);
      }
    } catch (error) {
      renderApiError(graphPanel, error);
    }
  });

  wireQueryPanel(
    queryPanel,
    api,
    () => session?.sessionId ?? null,
    (chosenIds) => {
      const snapshot = session?.graphSnapshot;
      if (snapshot) {
        highlightChosen(graphCanvas, chosenIds);
        applyTimeCursor(graphCanvas, snapshot, Number(slider.value));
      }
    },
  );
}

if (typeof document !== "undefined" && document.getElementById("session-panel")) {
  bootConsole(document, (window as unknown as { SCENEAGENT_BASE_URL?: string }).SCENEAGENT_BASE_URL ?? "");
}
