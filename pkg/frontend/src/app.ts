import { Api } from "./api.js";
import { el } from "./render.js";
import { mountConfigView } from "./views/config.js";
import { mountEvalView } from "./views/eval.js";
import { mountGlossaryView, mountTmView } from "./views/resources.js";
import { mountTranslationView } from "./views/translation.js";

type Mount = (root: HTMLElement, api: Api) => void;

const TABS: [string, string, Mount][] = [
  ["translate", "Translate", mountTranslationView],
  ["glossary", "Glossary", mountGlossaryView],
  ["tm", "Translation memory", mountTmView],
  ["eval", "Evaluation", mountEvalView],
  ["config", "Configuration", mountConfigView],
];

export function mountApp(root: HTMLElement, api: Api = new Api()): void {
  const nav = el("nav", { class: "tabs" });
  const content = el("main", { class: "content" });

  // Admin token lives only in this Api instance's memory for the session.
  const tokenInput = el("input", {
    type: "password", class: "admin-token", placeholder: "admin token (if required)",
  });
  tokenInput.addEventListener("change", () => api.setAdminToken(tokenInput.value));

  const buttons = new Map<string, HTMLButtonElement>();
  for (const [id, label, mount] of TABS) {
    const btn = el("button", { class: "tab", "data-tab": id }, label);
    btn.addEventListener("click", () => {
      buttons.forEach((b) => b.classList.remove("active"));
      btn.classList.add("active");
      mount(content, api);
    });
    buttons.set(id, btn);
    nav.append(btn);
  }
  nav.append(tokenInput);

  root.replaceChildren(el("header", { class: "app-header" }, el("h1", {}, "Tulun")), nav, content);
  buttons.get("translate")!.click();
}
