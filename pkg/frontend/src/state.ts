// Session state: inputs, the latest response with staleness, and history.
// One analysis is in flight at a time; triggers arriving meanwhile collapse
// into a single follow-up run against the latest inputs.

import type { AnalysisResponse } from "./types.js";

export interface HistoryEntry {
  readonly index: number;
  readonly code: string;
  readonly questionText: string;
  readonly response: AnalysisResponse;
}

export type AnalyzeFn = (code: string, questionText: string) => Promise<AnalysisResponse>;

export class SessionState {
  code = "";
  questionText = "";
  latest: AnalysisResponse | null = null;
  stale = false;
  lastError: string | null = null;
  readonly history: HistoryEntry[] = [];

  private inFlight = false;
  private pending = false;
  private listeners: (() => void)[] = [];

  constructor(private readonly analyzeFn: AnalyzeFn) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  get busy(): boolean {
    return this.inFlight;
  }

  setCode(code: string): void {
    if (code === this.code) return;
    this.code = code;
    if (this.latest) this.stale = true;
    this.notify();
  }

  setQuestionText(text: string): void {
    if (text === this.questionText) return;
    this.questionText = text;
    if (this.latest) this.stale = true;
    this.notify();
  }

  /** Trigger an analysis; concurrent triggers collapse to the latest state. */
  async runAnalysis(): Promise<void> {
    if (this.code.trim() === "") {
      this.lastError = "paste some code first";
      this.notify();
      return;
    }
    if (this.inFlight) {
      this.pending = true;
      return;
    }
    this.inFlight = true;
    this.notify();
    try {
      const code = this.code;
      const questionText = this.questionText;
      const response = await this.analyzeFn(code, questionText);
      this.latest = response;
      this.lastError = null;
      // the response is stale only if inputs moved while we were waiting
      this.stale = code !== this.code || questionText !== this.questionText;
      this.history.push({
        index: this.history.length,
        code,
        questionText,
        response,
      });
    } catch (err) {
      this.lastError = err instanceof Error ? err.message : String(err);
    } finally {
      this.inFlight = false;
    }
    this.notify();
    if (this.pending) {
      this.pending = false;
      await this.runAnalysis();
    }
  }
}
