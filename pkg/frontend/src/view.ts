// DOM rendering for the wizard. Pure function of the controller state:
// every render rebuilds the root's children from the latest server data.

import { AnswerValue, QuestionPayload, REPORT_FORMATS, SurveyApi } from "./api.js";
import { WizardController, WizardState } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function collectAnswer(question: QuestionPayload, form: HTMLElement): AnswerValue | null {
  if (question.kind === "single_choice") {
    const picked = form.querySelector<HTMLInputElement>("input[name=choice]:checked");
    if (!picked) return null;
    const text = form.querySelector<HTMLInputElement>(`input[data-other-for="${picked.value}"]`);
    const value: AnswerValue = { kind: "single", option: picked.value };
    if (text && text.value.trim()) value.text = text.value.trim();
    return value;
  }
  if (question.kind === "multi_choice") {
    const picked = [...form.querySelectorAll<HTMLInputElement>("input[name=choice]:checked")];
    if (picked.length === 0) return null;
    const texts: Record<string, string> = {};
    for (const box of picked) {
      const text = form.querySelector<HTMLInputElement>(`input[data-other-for="${box.value}"]`);
      if (text && text.value.trim()) texts[box.value] = text.value.trim();
    }
    const value: AnswerValue = { kind: "multi", selections: picked.map((box) => box.value) };
    if (Object.keys(texts).length > 0) value.texts = texts;
    return value;
  }
  if (question.kind === "boolean") {
    const toggle = form.querySelector<HTMLInputElement>("input[name=toggle]");
    return { kind: "boolean", value: Boolean(toggle?.checked) };
  }
  const box = form.querySelector<HTMLInputElement>("input[name=text]");
  return { kind: "text", value: box?.value ?? "" };
}

function renderChoices(question: QuestionPayload, multi: boolean): HTMLElement {
  const list = el("div", { class: "choices" });
  for (const option of question.options) {
    const input = el("input", {
      type: multi ? "checkbox" : "radio",
      name: "choice",
      id: `opt-${option.id}`,
      value: option.id,
      "data-testid": `option-${option.id}`,
    });
    const row = el("div", { class: "choice" }, [
      input,
      el("label", { for: `opt-${option.id}` }, [option.label]),
    ]);
    if (option.allows_free_text) {
      const slot = el("input", {
        type: "text",
        class: "other-text hidden",
        placeholder: "Please specify",
        "data-other-for": option.id,
        "data-testid": `other-${option.id}`,
      });
      input.addEventListener("change", () => {
        slot.classList.toggle("hidden", !input.checked);
      });
      if (!multi) {
        // Radios do not fire change on deselection; refresh all slots.
        list.addEventListener("change", () => {
          slot.classList.toggle("hidden", !input.checked);
        });
      }
      row.append(slot);
    }
    list.append(row);
  }
  return list;
}

function renderQuestion(
  state: WizardState,
  question: QuestionPayload,
  controller: WizardController,
): HTMLElement {
  const form = el("div", {
    class: "question",
    "data-testid": "question",
    "data-question-id": question.id,
  });
  form.append(el("h2", { "data-testid": "prompt" }, [question.prompt]));
  form.append(
    el("p", { class: "progress", "data-testid": "progress" }, [
      `${question.answered_count} answered`,
    ]),
  );
  if (question.kind === "single_choice") {
    form.append(renderChoices(question, false));
  } else if (question.kind === "multi_choice") {
    form.append(renderChoices(question, true));
  } else if (question.kind === "boolean") {
    form.append(
      el("div", { class: "choice" }, [
        el("input", { type: "checkbox", name: "toggle", id: "toggle", "data-testid": "toggle" }),
        el("label", { for: "toggle" }, ["Yes"]),
      ]),
    );
  } else {
    form.append(
      el("input", {
        type: "text",
        name: "text",
        class: "free-text",
        "data-testid": "free-text",
      }),
    );
  }
  if (state.fieldError) {
    form.append(el("p", { class: "field-error", "data-testid": "field-error" }, [state.fieldError]));
  }
  const nextButton = el("button", { "data-testid": "next" }, ["Next"]) as HTMLButtonElement;
  nextButton.disabled = state.pending;
  nextButton.addEventListener("click", () => {
    const value = collectAnswer(question, form);
    if (value === null) {
      form.append(
        el("p", { class: "field-error", "data-testid": "field-error" }, ["Select an option first."]),
      );
      return;
    }
    void controller.submit(value);
  });
  const buttons = el("div", { class: "buttons" }, [nextButton]);
  if (state.trail.length > 0) {
    const backButton = el("button", { "data-testid": "back" }, ["Back"]) as HTMLButtonElement;
    backButton.disabled = state.pending;
    backButton.addEventListener("click", () => void controller.back());
    buttons.prepend(backButton);
  }
  form.append(buttons);
  return form;
}

function renderConfirm(
  state: WizardState,
  answeredCount: number,
  controller: WizardController,
): HTMLElement {
  const panel = el("div", { class: "confirm", "data-testid": "confirm" });
  panel.append(el("h2", {}, ["All questions answered"]));
  panel.append(el("p", { "data-testid": "progress" }, [`${answeredCount} answered`]));
  const finish = el("button", { "data-testid": "finish" }, ["Show recommendations"]) as HTMLButtonElement;
  finish.disabled = state.pending;
  finish.addEventListener("click", () => void controller.confirmComplete());
  const backButton = el("button", { "data-testid": "back" }, ["Back"]) as HTMLButtonElement;
  backButton.disabled = state.pending;
  backButton.addEventListener("click", () => void controller.back());
  panel.append(el("div", { class: "buttons" }, [backButton, finish]));
  return panel;
}

function renderReport(
  state: WizardState,
  markdown: string,
  api: SurveyApi,
  controller: WizardController,
): HTMLElement {
  const page = el("div", { class: "report", "data-testid": "report" });
  page.append(el("h2", {}, ["Your recommendations"]));
  page.append(el("pre", { class: "report-text", "data-testid": "report-text" }, [markdown]));

  const downloads = el("div", { class: "downloads" });
  for (const format of REPORT_FORMATS) {
    downloads.append(
      el(
        "a",
        {
          href: api.reportUrl(state.token ?? "", format),
          download: `fairist-report.${format}`,
          "data-testid": `download-${format}`,
        },
        [`Download .${format}`],
      ),
    );
  }
  page.append(downloads);

  const copyButton = el("button", { "data-testid": "copy" }, ["Copy to clipboard"]) as HTMLButtonElement;
  copyButton.addEventListener("click", () => {
    void navigator.clipboard?.writeText(markdown).then(
      () => {
        copyButton.textContent = "Copied";
      },
      () => {
        copyButton.textContent = "Copy failed";
      },
    );
  });
  page.append(copyButton);

  const backButton = el("button", { "data-testid": "back" }, ["Back"]) as HTMLButtonElement;
  backButton.disabled = state.pending;
  backButton.addEventListener("click", () => void controller.back());
  page.append(backButton);
  return page;
}

export function render(
  root: HTMLElement,
  state: WizardState,
  controller: WizardController,
  api: SurveyApi,
): void {
  root.replaceChildren();
  root.append(el("h1", {}, ["FAIRIST"]));
  if (state.retryMessage) {
    const banner = el("div", { class: "retry-banner", "data-testid": "retry-banner" }, [
      state.retryMessage + " ",
    ]);
    const retryButton = el("button", { "data-testid": "retry" }, ["Retry"]);
    retryButton.addEventListener("click", () => void controller.retry());
    banner.append(retryButton);
    root.append(banner);
  }
  const phase = state.phase;
  switch (phase.kind) {
    case "loading":
      root.append(el("p", { "data-testid": "loading" }, ["Loading..."]));
      break;
    case "question":
      root.append(renderQuestion(state, phase.question, controller));
      break;
    case "confirm":
      root.append(renderConfirm(state, phase.answeredCount, controller));
      break;
    case "report":
      root.append(renderReport(state, phase.markdown, api, controller));
      break;
    case "invalid-link":
      root.append(
        el("div", { class: "invalid-link", "data-testid": "invalid-link" }, [
          el("h2", {}, ["This link is not valid"]),
          el("p", {}, ["The session link may be mistyped. Check the address or start a new survey."]),
        ]),
      );
      break;
    case "fatal":
      root.append(el("p", { class: "fatal", "data-testid": "fatal" }, [phase.message]));
      break;
  }
}
