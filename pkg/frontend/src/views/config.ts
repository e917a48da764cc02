import { Api, ApiError } from "../api.js";
import { el } from "../render.js";
import type { EngineConfig } from "../types.js";

export function mountConfigView(root: HTMLElement, api: Api): void {
  const status = el("div", { class: "status" });
  const form = el("div", { class: "config-form" });
  root.replaceChildren(el("section", { class: "config-view" },
    el("h2", {}, "Configuration"), status, form));

  async function load(): Promise<void> {
    try {
      render(await api.getConfig());
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
    }
  }

  function render(config: EngineConfig): void {
    const siteTitle = textField("site_title", config.site_title);
    const srcLang = textField("source_language_name", config.source_language_name);
    const tgtLang = textField("target_language_name", config.target_language_name);
    const tmCount = textField("tm_retrieval_count", String(config.tm_retrieval_count));
    const glossCap = textField("glossary_injection_cap", String(config.glossary_injection_cap));
    const mtKind = textField("mt_kind", config.mt_backend.kind);
    const mtUrl = textField("mt_endpoint_url", config.mt_backend.endpoint_url);
    const llmKind = textField("llm_kind", config.llm_backend.kind);
    const llmUrl = textField("llm_endpoint_url", config.llm_backend.endpoint_url);
    const llmModel = textField("llm_model_id", config.llm_backend.model_id);
    const temperature = textField("llm_temperature", String(config.llm_backend.temperature));
    const maxTokens = textField("llm_max_output_tokens", String(config.llm_backend.max_output_tokens));
    const systemPrompt = el("textarea", { class: "field-system_prompt", rows: "8" });
    systemPrompt.value = config.llm_backend.system_prompt;

    const save = el("button", { class: "config-save" }, "Save");
    save.addEventListener("click", async () => {
      const patch = {
        site_title: siteTitle.value,
        source_language_name: srcLang.value,
        target_language_name: tgtLang.value,
        tm_retrieval_count: Number(tmCount.value),
        glossary_injection_cap: Number(glossCap.value),
        mt_backend: { kind: mtKind.value, endpoint_url: mtUrl.value },
        llm_backend: {
          kind: llmKind.value,
          endpoint_url: llmUrl.value,
          model_id: llmModel.value,
          temperature: Number(temperature.value),
          max_output_tokens: Number(maxTokens.value),
          system_prompt: systemPrompt.value,
        },
      };
      try {
        render(await api.putConfig(patch));
        status.textContent = "Saved.";
      } catch (err) {
        status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
      }
    });

    form.replaceChildren(
      group("Site", labeled("Title", siteTitle),
        labeled("Source language", srcLang), labeled("Target language", tgtLang)),
      group("Retrieval", labeled("TM matches per query (N)", tmCount),
        labeled("Glossary injection cap (0 = unlimited)", glossCap)),
      group("MT backend", labeled("Kind", mtKind), labeled("Endpoint URL", mtUrl),
        el("p", { class: "hint" },
          `Credentials are read from the ${config.mt_backend.auth_token_env} environment variable on the server.`)),
      group("LLM backend", labeled("Kind", llmKind), labeled("Endpoint URL", llmUrl),
        labeled("Model", llmModel), labeled("Temperature", temperature),
        labeled("Max output tokens", maxTokens),
        labeled("System prompt", systemPrompt),
        el("p", { class: "hint" },
          `Credentials are read from the ${config.llm_backend.auth_token_env} environment variable on the server.`)),
      save,
    );
  }

  function textField(name: string, value: string): HTMLInputElement {
    const field = el("input", { class: `field-${name}` });
    field.value = value;
    return field;
  }

  function labeled(label: string, field: HTMLElement): HTMLElement {
    return el("label", { class: "config-field" }, label, field);
  }

  function group(title: string, ...children: (Node | string)[]): HTMLElement {
    return el("fieldset", {}, el("legend", {}, title), ...children);
  }

  void load();
}
