// Ask panel: one in-flight question at a time; the answer card shows the
// API-reported confidence as a 0-100% bar, an abstention badge when the agent
// abstained, and the full thought/action/observation trace collapsibly.

import { ApiClient, ApiError } from "../api.js";
import { ConsoleSession, HistoryEntry } from "../state.js";
import type { AgentTrace, TraceStep } from "../types.js";

function describeAction(step: TraceStep): string {
  const action = step.action;
  if (action.type === "tool") {
    return `${action.name}(${JSON.stringify(action.args ?? {})})`;
  }
  if (action.type === "final_answer") {
    return `final answer: ${action.text ?? ""}`;
  }
  return action.type;
}

export function renderTrace(container: HTMLElement, trace: AgentTrace): void {
  const viewer = document.createElement("div");
  viewer.className = "trace-viewer";
  for (const step of trace.steps) {
    const card = document.createElement("details");
    card.className = "trace-step";
    card.dataset.stepIndex = String(step.step_index);
    const summary = document.createElement("summary");
    summary.textContent = `step ${step.step_index}: ${describeAction(step)}`;
    card.appendChild(summary);
    const body = document.createElement("div");
    body.innerHTML = `
      <p class="step-thought">${step.thought}</p>
      <pre class="step-observation">${step.observation}</pre>
    `;
    card.appendChild(body);
    viewer.appendChild(card);
  }
  container.appendChild(viewer);
}

export function renderAnswer(container: HTMLElement, entry: HistoryEntry): HTMLElement {
  const card = document.createElement("div");
  card.className = "answer-card";
  card.dataset.traceRef = entry.trace_ref;
  const pct = entry.confidence * 100;
  card.innerHTML = `
    <p class="question">${entry.question}</p>
    <p class="answer">${entry.answer}</p>
    <div class="confidence-bar"><div class="confidence-fill" style="width: ${pct}%"></div></div>
    <span class="confidence-value">${entry.confidence}</span>
  `;
  if (entry.abstained) {
    const badge = document.createElement("span");
    badge.className = "abstained-badge";
    badge.textContent = "uncertain";
    card.appendChild(badge);
  }
  container.appendChild(card);
  return card;
}

export function wireAskPanel(
  container: HTMLElement,
  api: ApiClient,
  getSession: () => ConsoleSession | null,
): void {
  const form = container.querySelector("form") as HTMLFormElement;
  const input = container.querySelector("input[name=question]") as HTMLInputElement;
  const submit = container.querySelector("button") as HTMLButtonElement;
  const answers = container.querySelector(".answers") as HTMLElement;

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const session = getSession();
    if (!session || session.askPending) {
      return;
    }
    session.askPending = true;
    submit.disabled = true;
    container.querySelectorAll(".error-banner, .budget-banner").forEach((el) => el.remove());
    try {
      const result = await api.ask(session.sessionId, input.value);
      const entry = session.recordAnswer(input.value, result);
      const card = renderAnswer(answers, entry);
      const trace = await api.getTrace(result.trace_ref);
      renderTrace(card, trace);
    } catch (error) {
      if (error instanceof ApiError && error.code === "budget_exceeded") {
        const banner = document.createElement("div");
        banner.className = "budget-banner";
        banner.textContent = "session call budget exhausted";
        container.prepend(banner);
      } else {
        const banner = document.createElement("div");
        banner.className = "error-banner";
        banner.dataset.code = error instanceof ApiError ? error.code : "unknown";
        banner.textContent = String(error instanceof Error ? error.message : error);
        container.prepend(banner);
      }
    } finally {
      session.askPending = false;
      submit.disabled = false;
    }
  });
}
