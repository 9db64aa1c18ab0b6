// Query console: submit query text; syntax errors render a caret under the
// reported character offset; result rows link ids into the graph explorer.

import { ApiClient, ApiError } from "../api.js";
import type { QueryResult } from "../types.js";

export function renderSyntaxError(container: HTMLElement, query: string, error: ApiError): void {
  const block = document.createElement("pre");
  block.className = "syntax-error";
  const offset = Math.max(1, error.offset ?? 1);
  const caretLine = " ".repeat(offset - 1) + "^";
  block.textContent = `${query}\n${caretLine}\n${error.message}`;
  container.appendChild(block);
}

export function renderResult(
  container: HTMLElement,
  result: QueryResult,
  onPick?: (chosenIds: string[]) => void,
): void {
  const panel = document.createElement("div");
  panel.className = "query-result";
  if (result.value !== null) {
    const value = document.createElement("p");
    value.className = "query-value";
    value.textContent = String(result.value);
    panel.appendChild(value);
  }
  if (result.rows.length > 0) {
    const table = document.createElement("table");
    table.className = "query-rows";
    const vars = Object.keys(result.rows[0]);
    table.innerHTML = `<thead><tr>${vars.map((v) => `<th>${v}</th>`).join("")}</tr></thead>`;
    const body = document.createElement("tbody");
    result.rows.forEach((row) => {
      const tr = document.createElement("tr");
      tr.className = "query-row";
      tr.innerHTML = vars.map((v) => `<td class="result-id">${row[v]}</td>`).join("");
      tr.addEventListener("click", () => onPick?.(result.trace.chosen_ids));
      body.appendChild(tr);
    });
    table.appendChild(body);
    panel.appendChild(table);
  }
  const trace = document.createElement("pre");
  trace.className = "query-trace";
  trace.textContent = [
    `candidates: ${result.trace.candidate_count}`,
    ...result.trace.filter_steps.map(([desc, count]) => `${desc} -> ${count}`),
    `order: ${result.trace.order_key}`,
    `chosen: ${result.trace.chosen_ids.join(", ") || "-"}`,
  ].join("\n");
  panel.appendChild(trace);
  container.appendChild(panel);
}

export function wireQueryPanel(
  container: HTMLElement,
  api: ApiClient,
  getSessionId: () => string | null,
  onChosen: (chosenIds: string[]) => void,
): void {
  const form = container.querySelector("form") as HTMLFormElement;
  const input = container.querySelector("input[name=query]") as HTMLInputElement;
  const output = container.querySelector(".query-output") as HTMLElement;

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    output.innerHTML = "";
    const sessionId = getSessionId();
    if (!sessionId) return;
    try {
      const result = await api.query(sessionId, input.value);
      renderResult(output, result, onChosen);
      onChosen(result.trace.chosen_ids);
    } catch (error) {
      if (error instanceof ApiError && error.code === "bad_request" && error.offset) {
        renderSyntaxError(output, input.value, error);
      } else if (error instanceof ApiError && error.code === "conflict") {
        const note = document.createElement("p");
        note.className = "conflict-note";
        note.textContent = "no scene graph yet - run SceneGen first";
        output.appendChild(note);
      } else {
        const banner = document.createElement("div");
        banner.className = "error-banner";
        banner.textContent = String(error instanceof Error ? error.message : error);
        output.appendChild(banner);
      }
    }
  });
}
