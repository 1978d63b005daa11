// Typed client for the survey service. The client never interprets rules or
// visibility; it only relays server responses.

export interface OptionPayload {
  id: string;
  label: string;
  allows_free_text: boolean;
}

export interface QuestionPayload {
  complete: false;
  id: string;
  prompt: string;
  kind: "single_choice" | "multi_choice" | "boolean" | "free_text";
  options: OptionPayload[];
  answered_count: number;
}

export interface CompletePayload {
  complete: true;
  answered_count: number;
}

export type NextPayload = QuestionPayload | CompletePayload;

export interface SessionState {
  token: string;
  schema_id: string;
  schema_version: string;
  status: "in_progress" | "complete";
  answers: Record<string, AnswerValue>;
  answered_count: number;
}

export type AnswerValue =
  | { kind: "single"; option: string; text?: string }
  | { kind: "multi"; selections: string[]; texts?: Record<string, string> }
  | { kind: "boolean"; value: boolean }
  | { kind: "text"; value: string };

export interface ApiErrorBody {
  code: string;
  detail: string;
  question_id?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.detail}`);
  }
}

export class NetworkError extends Error {}

export type ReportFormat = "md" | "json" | "nt";
export const REPORT_FORMATS: ReportFormat[] = ["md", "json", "nt"];

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, init);
  } catch (cause) {
    throw new NetworkError(String(cause));
  }
  if (!response.ok) {
    const body = (await response.json().catch(() => ({
      code: "unknown",
      detail: response.statusText,
    }))) as ApiErrorBody;
    throw new ApiError(response.status, body);
  }
  if (response.status === 204) {
    return undefined as T;
  }
  return (await response.json()) as T;
}

export class SurveyApi {
  constructor(readonly base: string = "") {}

  createSession(): Promise<{ token: string; schema_id: string; schema_version: string }> {
    return request(this.base, "/api/v1/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({}),
    });
  }

  getSession(token: string): Promise<SessionState> {
    return request(this.base, `/api/v1/sessions/${token}`);
  }

  getNext(token: string): Promise<NextPayload> {
    return request(this.base, `/api/v1/sessions/${token}/next`);
  }

  submitAnswer(
    token: string,
    questionId: string,
    value: AnswerValue,
  ): Promise<{ session: SessionState; next: NextPayload }> {
    return request(this.base, `/api/v1/sessions/${token}/answers`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question_id: questionId, value }),
    });
  }

  retractAnswer(token: string, questionId: string): Promise<SessionState> {
    return request(this.base, `/api/v1/sessions/${token}/answers/${questionId}`, {
      method: "DELETE",
    });
  }

  completeSession(token: string): Promise<{ report: string }> {
    return request(this.base, `/api/v1/sessions/${token}/complete`, { method: "POST" });
  }

  async fetchReport(token: string, format: ReportFormat): Promise<string> {
    let response: Response;
    try {
      response = await fetch(`${this.base}/api/v1/reports/${token}?format=${format}`);
    } catch (cause) {
      throw new NetworkError(String(cause));
    }
    if (!response.ok) {
      const body = (await response.json().catch(() => ({
        code: "unknown",
        detail: response.statusText,
      }))) as ApiErrorBody;
      throw new ApiError(response.status, body);
    }
    return response.text();
  }

  reportUrl(token: string, format: ReportFormat): string {
    return `${this.base}/api/v1/reports/${token}?format=${format}`;
  }
}
