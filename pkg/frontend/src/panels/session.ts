// Session panel: open a session from a manifest path and show what arrived.

import { ApiClient, ApiError } from "../api.js";
import { ConsoleSession } from "../state.js";

export function renderApiError(container: HTMLElement, error: unknown): void {
  const banner = document.createElement("div");
  banner.className = "error-banner";
  if (error instanceof ApiError) {
    banner.dataset.code = error.code;
    banner.textContent = `${error.code}: ${error.message}`;
  } else {
    banner.dataset.code = "unknown";
    banner.textContent = String(error);
  }
  container.prepend(banner);
}

export function renderSessionSummary(container: HTMLElement, session: ConsoleSession): void {
  const summary = session.summary;
  const card = document.createElement("div");
  card.className = "session-card";
  card.innerHTML = `
    <h3>${summary.video_id}</h3>
    <dl>
      <dt>session</dt><dd class="session-id">${summary.session_id}</dd>
      <dt>keyframes</dt><dd class="keyframe-count">${summary.keyframe_count}</dd>
      <dt>duration</dt><dd>${summary.duration_s}s</dd>
      <dt>budget</dt><dd class="budget">${summary.call_budget}</dd>
    </dl>
    <div class="keyframe-strip"></div>
  `;
  const strip = card.querySelector(".keyframe-strip") as HTMLElement;
  for (let i = 0; i < summary.keyframe_count; i++) {
    const thumb = document.createElement("span");
    thumb.className = "keyframe-thumb";
    thumb.textContent = `kf ${i}`;
    strip.appendChild(thumb);
  }
  container.appendChild(card);
}

export function wireSessionPanel(
  container: HTMLElement,
  api: ApiClient,
  onOpen: (session: ConsoleSession) => void,
): void {
  const form = container.querySelector("form") as HTMLFormElement;
  const input = container.querySelector("input[name=manifest]") as HTMLInputElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    container.querySelectorAll(".error-banner").forEach((el) => el.remove());
    try {
      const summary = await api.createSession(input.value);
      const session = new ConsoleSession(summary);
      renderSessionSummary(container, session);
      onOpen(session);
    } catch (error) {
      renderApiError(container, error);
    }
  });
}
