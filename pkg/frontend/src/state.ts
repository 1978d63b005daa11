// Wizard state machine. Every transition is driven by a server response;
// the client never computes visibility or recommendations itself.

import {
  ApiError,
  AnswerValue,
  NetworkError,
  NextPayload,
  QuestionPayload,
  SurveyApi,
} from "./api.js";

export type WizardPhase =
  | { kind: "loading" }
  | { kind: "question"; question: QuestionPayload }
  | { kind: "confirm"; answeredCount: number }
  | { kind: "report"; markdown: string }
  | { kind: "invalid-link" }
  | { kind: "fatal"; message: string };

export interface WizardState {
  token: string | null;
  phase: WizardPhase;
  trail: string[]; // answered question ids, oldest first
  pending: boolean; // a mutation is in flight; controls are disabled
  fieldError: string | null; // inline 422 message for the current question
  retryMessage: string | null; // network-failure banner; state is preserved
}

export type Listener = (state: WizardState) => void;

export class WizardController {
  private state: WizardState = {
    token: null,
    phase: { kind: "loading" },
    trail: [],
    pending: false,
    fieldError: null,
    retryMessage: null,
  };
  private listeners: Listener[] = [];

  constructor(private readonly api: SurveyApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.state);
  }

  get current(): WizardState {
    return this.state;
  }

  private update(partial: Partial<WizardState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  /** Create a fresh session (no token in the URL). */
  async start(): Promise<void> {
    await this.guarded(async () => {
      const created = await this.api.createSession();
      this.update({ token: created.token, trail: [] });
      await this.refreshNext();
    });
  }

  /** Resume the session named by a /s/{token} URL. */
  async resume(token: string): Promise<void> {
    await this.guarded(async () => {
      this.update({ token });
      const session = await this.api.getSession(token);
      this.update({ trail: Object.keys(session.answers) });
      if (session.status === "complete") {
        await this.showReport();
      } else {
        await this.refreshNext();
      }
    });
  }

  async submit(value: AnswerValue): Promise<void> {
    const phase = this.state.phase;
    if (phase.kind !== "question") return;
    await this.guarded(async () => {
      const result = await this.api.submitAnswer(this.state.token!, phase.question.id, value);
      const trail = Object.keys(result.session.answers);
      this.update({ trail, fieldError: null });
      this.applyNext(result.next);
    });
  }

  /** Retract the most recent answer and re-present its question. */
  async back(): Promise<void> {
    const trail = this.state.trail;
    if (trail.length === 0 || this.state.token === null) return;
    const latest = trail[trail.length - 1];
    await this.guarded(async () => {
      const session = await this.api.retractAnswer(this.state.token!, latest);
      this.update({ trail: Object.keys(session.answers), fieldError: null });
      await this.refreshNext();
    });
  }

  async confirmComplete(): Promise<void> {
    await this.guarded(async () => {
      await this.api.completeSession(this.state.token!);
      await this.showReport();
    });
  }

  async retry(): Promise<void> {
    this.update({ retryMessage: null });
    if (this.state.token === null) {
      await this.start();
    } else {
      await this.resume(this.state.token);
    }
  }

  private async refreshNext(): Promise<void> {
    const next = await this.api.getNext(this.state.token!);
    this.applyNext(next);
  }

  private applyNext(next: NextPayload): void {
    if (next.complete) {
      this.update({ phase: { kind: "confirm", answeredCount: next.answered_count } });
    } else {
      this.update({ phase: { kind: "question", question: next } });
    }
  }

  private async showReport(): Promise<void> {
    const markdown = await this.api.fetchReport(this.state.token!, "md");
    this.update({ phase: { kind: "report", markdown } });
  }

  private async guarded(action: () => Promise<void>): Promise<void> {
    if (this.state.pending) return;
    this.update({ pending: true });
    try {
      await action();
      this.update({ pending: false });
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.update({ pending: false, phase: { kind: "invalid-link" } });
      } else if (error instanceof ApiError && error.status === 422) {
        this.update({ pending: false, fieldError: error.body.detail });
      } else if (error instanceof NetworkError) {
        this.update({ pending: false, retryMessage: "Connection failed. Your answers are saved." });
      } else if (error instanceof ApiError) {
        this.update({ pending: false, phase: { kind: "fatal", message: error.message } });
      } else {
        throw error;
      }
    }
  }
}
