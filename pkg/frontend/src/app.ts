import { ApiClient } from "./api.js";
import {
  renderChecklist,
  renderGauge,
  renderHints,
  renderHistory,
  renderShapleyBars,
} from "./render.js";
import { SessionState } from "./state.js";

const LAYOUT = `
  <header>
    <h1>reprolens</h1>
    <p class="tagline">Will your snippet reproduce the issue you are reporting?</p>
    <span id="service-status" class="status-unknown">checking service…</span>
  </header>
  <main class="columns">
    <section class="editor-pane">
      <label for="question-text">Question text</label>
      <textarea id="question-text" rows="3"
        placeholder="Describe the issue, including any error or exception text"></textarea>
      <label for="code-input">Code snippet</label>
      <textarea id="code-input" rows="18" spellcheck="false"
        placeholder="Paste the Java snippet here"></textarea>
      <div class="actions">
        <button id="analyze-button" type="button">Analyze</button>
        <span id="stale-flag" class="stale" hidden>results are stale — re-analyze</span>
        <span id="busy-flag" hidden>analyzing…</span>
      </div>
      <p id="error-box" class="error" hidden></p>
    </section>
    <section class="results-pane">
      <div id="gauge-panel"></div>
      <h2>Feature checklist</h2>
      <div id="checklist-panel"></div>
      <h2>Why — feature contributions</h2>
      <div id="shapley-panel"></div>
      <h2>Improvement hints</h2>
      <div id="hints-panel"></div>
      <h2>Session history</h2>
      <div id="history-panel"></div>
    </section>
  </main>
`;

export interface App {
  state: SessionState;
  root: HTMLElement;
}

export function createApp(root: HTMLElement, baseUrl = ""): App {
  const client = new ApiClient(baseUrl);
  const state = new SessionState((code, questionText) =>
    client.analyze(code, questionText)
  );
  root.innerHTML = LAYOUT;

  const codeInput = root.querySelector<HTMLTextAreaElement>("#code-input")!;
  const questionInput = root.querySelector<HTMLTextAreaElement>("#question-text")!;
  const analyzeButton = root.querySelector<HTMLButtonElement>("#analyze-button")!;
  const staleFlag = root.querySelector<HTMLElement>("#stale-flag")!;
  const busyFlag = root.querySelector<HTMLElement>("#busy-flag")!;
  const errorBox = root.querySelector<HTMLElement>("#error-box")!;

  codeInput.addEventListener("input", () => state.setCode(codeInput.value));
  questionInput.addEventListener("input", () => state.setQuestionText(questionInput.value));
  analyzeButton.addEventListener("click", () => {
    void state.runAnalysis();
  });

  const panels = {
    gauge: root.querySelector<HTMLElement>("#gauge-panel")!,
    checklist: root.querySelector<HTMLElement>("#checklist-panel")!,
    shapley: root.querySelector<HTMLElement>("#shapley-panel")!,
    hints: root.querySelector<HTMLElement>("#hints-panel")!,
    history: root.querySelector<HTMLElement>("#history-panel")!,
  };

  state.onChange(() => {
    staleFlag.hidden = !state.stale;
    busyFlag.hidden = !state.busy;
    errorBox.hidden = state.lastError === null;
    errorBox.textContent = state.lastError ?? "";
    if (state.latest) {
      panels.gauge.innerHTML = renderGauge(
        state.latest.probability_reproducible,
        state.latest.predicted
      );
      panels.checklist.innerHTML = renderChecklist(state.latest.features);
      panels.shapley.innerHTML = renderShapleyBars(state.latest);
      panels.hints.innerHTML = renderHints(state.latest);
    }
    panels.history.innerHTML = renderHistory(state.history);
  });

  const statusBadge = root.querySelector<HTMLElement>("#service-status")!;
  client
    .health()
    .then((h) => {
      statusBadge.textContent = `service ok (${h.model_fingerprint.slice(0, 8)})`;
      statusBadge.className = "status-ok";
    })
    .catch(() => {
      statusBadge.textContent = "service unreachable";
      statusBadge.className = "status-down";
    });

  return { state, root };
}
