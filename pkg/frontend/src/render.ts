// Rendering is a pure projection of the AnalysisResponse; nothing is
// re-derived client-side beyond display formatting.

import type { AnalysisResponse, FeatureName, FeatureValues } from "./types.js";
import { FEATURE_ORDER } from "./types.js";

export type RowStatus = "pass" | "warn" | "fail";

const FEATURE_LABELS: Record<FeatureName, string> = {
  loc: "Lines of code",
  has_method: "Has a method",
  has_main: "Has a main method",
  has_class: "Has a class",
  parsable: "Parses",
  compilable: "Compiles",
  native_import: "JDK imports",
  external_import: "External imports",
  exception_handling: "Exception handling",
};

export function rowStatus(name: FeatureName, features: FeatureValues): RowStatus {
  const value = features[name];
  switch (name) {
    case "loc":
      return (value as number) <= 2 ? "fail" : "pass";
    case "parsable":
    case "compilable":
      return value ? "pass" : "fail";
    case "has_method":
    case "has_main":
    case "has_class":
      return value ? "pass" : "warn";
    default:
      // tri-states: -1 required element absent, 0 not needed, +1 present
      return value === -1 ? "fail" : value === 0 ? "warn" : "pass";
  }
}

function formatValue(name: FeatureName, features: FeatureValues): string {
  const value = features[name];
  if (typeof value === "boolean") return value ? "yes" : "no";
  if (name === "loc") return String(value);
  return value === 1 ? "+1" : value === -1 ? "-1" : "0";
}

export function renderChecklist(features: FeatureValues): string {
  const rows = FEATURE_ORDER.map((name) => {
    const status = rowStatus(name, features);
    return (
      `<tr class="row-${status}" data-feature="${name}" data-status="${status}">` +
      `<td class="status">${status === "pass" ? "✓" : status === "warn" ? "–" : "✗"}</td>` +
      `<td>${FEATURE_LABELS[name]}</td>` +
      `<td class="value">${formatValue(name, features)}</td></tr>`
    );
  });
  return `<table class="checklist"><tbody>${rows.join("")}</tbody></table>`;
}

export function renderGauge(probability: number, predicted: string): string {
  const pct = Math.round(probability * 100);
  return (
    `<div class="gauge" data-probability="${probability.toFixed(6)}">` +
    `<div class="gauge-bar"><div class="gauge-fill" style="width:${pct}%"></div></div>` +
    `<div class="gauge-label">${pct}% likely reproducible — ` +
    `<strong class="prediction">${predicted}</strong></div></div>`
  );
}

export function renderShapleyBars(response: AnalysisResponse): string {
  const shap = response.shapley;
  const entries = FEATURE_ORDER.map((name) => ({
    name,
    phi: shap.phi[name] ?? 0,
    value: shap.instance[name] ?? 0,
  })).sort((a, b) => Math.abs(b.phi) - Math.abs(a.phi));
  const maxAbs = Math.max(...entries.map((e) => Math.abs(e.phi)), 1e-9);
  const sum = entries.reduce((acc, e) => acc + e.phi, 0);
  const rows = entries.map((e) => {
    const width = (Math.abs(e.phi) / maxAbs) * 50;
    const side = e.phi >= 0 ? "pos" : "neg";
    const left = e.phi >= 0 ? 50 : 50 - width;
    return (
      `<div class="shap-row" data-feature="${e.name}">` +
      `<span class="shap-name">${e.name}=${e.value}</span>` +
      `<span class="shap-track"><span class="shap-bar ${side}"` +
      ` style="left:${left}%;width:${width}%"></span></span>` +
      `<span class="shap-phi">${e.phi >= 0 ? "+" : ""}${e.phi.toFixed(4)}</span></div>`
    );
  });
  return (
    `<div class="shap" data-base="${shap.base_value.toFixed(6)}"` +
    ` data-prediction="${shap.prediction.toFixed(6)}">` +
    rows.join("") +
    `<div class="shap-sum">base ${shap.base_value.toFixed(3)} + contributions ` +
    `${sum >= 0 ? "+" : ""}${sum.toFixed(3)} = prediction ${shap.prediction.toFixed(3)}</div>` +
    `</div>`
  );
}

export function renderHints(response: AnalysisResponse): string {
  if (response.hints.length === 0) {
    return `<p class="no-hints">No improvement hints — nice snippet.</p>`;
  }
  const cards = response.hints.map(
    (hint) =>
      `<div class="hint-card" data-challenge="${hint.challenge_id}">` +
      `<span class="hint-id">${hint.challenge_id}</span>` +
      (hint.advisory ? `<span class="hint-advisory">advisory</span>` : "") +
      `<p>${hint.message}</p>` +
      `<span class="hint-feature">signal: ${hint.triggering_feature}</span></div>`
  );
  return cards.join("");
}

export function renderHistory(entries: { index: number; response: AnalysisResponse }[]): string {
  if (entries.length === 0) return `<p class="no-history">No analyses yet.</p>`;
  const items = entries
    .map(
      (e) =>
        `<li class="history-entry" data-index="${e.index}">#${e.index + 1} — ` +
        `${Math.round(e.response.probability_reproducible * 100)}% ` +
        `${e.response.predicted}, ${e.response.hints.length} hint(s)</li>`
    )
    .reverse();
  return `<ol class="history">${items.join("")}</ol>`;
}
