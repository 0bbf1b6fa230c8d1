import type { AnalysisResponse, ServiceError } from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ServiceError) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  async analyze(code: string, questionText: string): Promise<AnalysisResponse> {
    const response = await fetch(`${this.baseUrl}/api/analyze`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ code, question_text: questionText, combine: false }),
    });
    if (!response.ok) {
      let body: ServiceError;
      try {
        body = (await response.json()) as ServiceError;
      } catch {
        body = { code: "HttpError", message: `service returned ${response.status}` };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as AnalysisResponse;
  }

  async health(): Promise<{ status: string; model_fingerprint: string }> {
    const response = await fetch(`${this.baseUrl}/api/health`);
    if (!response.ok) {
      throw new ApiError(response.status, {
        code: "HttpError",
        message: `health returned ${response.status}`,
      });
    }
    return (await response.json()) as { status: string; model_fingerprint: string };
  }
}
