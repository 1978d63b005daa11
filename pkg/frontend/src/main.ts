// Entry point: wire the controller to the DOM and the /s/{token} URL.

import { SurveyApi } from "./api.js";
import { WizardController } from "./state.js";
import { render } from "./view.js";

export function initWizard(root: HTMLElement, apiBase: string = ""): WizardController {
  const api = new SurveyApi(apiBase);
  const controller = new WizardController(api);
  controller.subscribe((state) => render(root, state, controller, api));

  const match = window.location.pathname.match(/^\/s\/([A-Za-z0-9_-]+)$/);
  if (match) {
    void controller.resume(match[1]);
  } else {
    void controller.start().then(() => {
      const token = controller.current.token;
      if (token) {
        window.history.replaceState(null, "", `/s/${token}`);
      }
    });
  }
  return controller;
}

declare global {
  interface Window {
    fairistWizard?: WizardController;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.fairistWizard = initWizard(document.getElementById("app")!);
}
