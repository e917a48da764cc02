import { Api, ApiError } from "../api.js";
import { el, renderHighlights } from "../render.js";
import type { TranslationPayload } from "../types.js";

export function mountTranslationView(root: HTMLElement, api: Api): void {
  const input = el("textarea", { class: "source-input", rows: "4", placeholder: "Enter a sentence or paragraph" });
  const submit = el("button", { class: "translate-btn" }, "Translate");
  const status = el("div", { class: "status" });
  const output = el("div", { class: "translation-output" });

  root.replaceChildren(
    el("section", { class: "translation-view" },
      el("div", { class: "input-row" }, input, submit),
      status,
      output,
    ),
  );

  // Single in-flight request per view: a newer submission supersedes any
  // response still on the wire (last-write-wins on screen).
  let seq = 0;

  async function run(): Promise<void> {
    const mine = ++seq;
    status.textContent = "Translating…";
    let result: TranslationPayload;
    try {
      result = await api.translate(input.value);
    } catch (err) {
      if (mine !== seq) return;
      status.textContent = err instanceof ApiError ? `Error (${err.code}): ${err.message}` : String(err);
      return;
    }
    if (mine !== seq) return;
    status.textContent = "";
    render(result);
  }

  function render(result: TranslationPayload): void {
    output.replaceChildren();

    if (result.degraded) {
      output.append(el("div", { class: "degraded-banner" },
        "Post-editing unavailable — showing the raw machine translation.",
        result.error_detail ? ` (${result.error_detail})` : ""));
    }

    const mtPane = el("div", { class: "pane mt-pane" }, el("h3", {}, "Machine translation"));
    const mtText = el("p", { class: "mt-text" });
    mtText.append(renderHighlights(result.mt_text, result.mt_diff_spans, "diff-del"));
    mtPane.append(mtText);

    const apePane = el("div", { class: "pane ape-pane" }, el("h3", {}, "Post-edited"));
    const apeText = el("p", { class: "ape-text" });
    apeText.append(renderHighlights(result.post_edited_text, result.ape_diff_spans, "diff-ins"));
    apePane.append(apeText);
    if (result.mt_text === result.post_edited_text) {
      apePane.append(el("p", { class: "no-changes" }, "No changes from the machine translation."));
    }

    const saveBtn = el("button", { class: "save-tm-btn" }, "Save to TM");
    saveBtn.addEventListener("click", () => openSaveModal(result));
    apePane.append(saveBtn);

    const evidence = el("div", { class: "evidence" });
    const glossary = el("div", { class: "pane glossary-matches" }, el("h3", {}, "Glossary matches"));
    if (result.glossary_matches.length === 0) {
      glossary.append(el("p", { class: "empty" }, "none"));
    } else {
      glossary.append(el("ul", {}, ...result.glossary_matches.map((m) =>
        el("li", {}, `${m.entry.source_term} → ${m.entry.target_text}`))));
    }
    const tm = el("div", { class: "pane tm-matches" }, el("h3", {}, "Similar past translations"));
    if (result.tm_matches.length === 0) {
      tm.append(el("p", { class: "empty" }, "none"));
    } else {
      tm.append(el("ol", {}, ...result.tm_matches.map((m) =>
        el("li", {},
          el("div", { class: "tm-src" }, m.entry.source_text),
          el("div", { class: "tm-tgt" }, m.entry.target_text),
          el("div", { class: "tm-score" }, `BM25 ${m.score.toFixed(3)}`)))));
    }
    evidence.append(glossary, tm);

    if (result.reference) {
      output.append(el("div", { class: "pane reference-pane" },
        el("h3", {}, "Reference"),
        el("p", { class: "reference-text" }, result.reference.reference_text)));
    }

    const transcript = el("details", { class: "prompt-transcript" },
      el("summary", {}, "Prompt transcript"),
      ...result.prompt_transcript.map((m) =>
        el("div", { class: `msg msg-${m.role}` },
          el("strong", {}, m.role), el("pre", {}, m.content))));

    output.append(mtPane, apePane, evidence, transcript);
  }

  function openSaveModal(result: TranslationPayload): void {
    const source = el("textarea", { class: "save-source", rows: "3", readonly: "" });
    source.value = result.source_text;
    const target = el("textarea", { class: "save-target", rows: "3" });
    target.value = result.post_edited_text;
    const confirm = el("button", { class: "save-confirm" }, "Save");
    const cancel = el("button", { class: "save-cancel" }, "Cancel");
    const note = el("div", { class: "save-status" });
    const modal = el("div", { class: "modal save-modal" },
      el("h3", {}, "Save to translation memory"),
      el("label", {}, "Source"), source,
      el("label", {}, "Final translation"), target,
      note,
      el("div", { class: "modal-actions" }, confirm, cancel),
    );
    cancel.addEventListener("click", () => modal.remove());
    confirm.addEventListener("click", async () => {
      try {
        await api.saveTm(source.value, target.value);
        modal.remove();
        status.textContent = "Saved to translation memory.";
      } catch (err) {
        note.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
      }
    });
    root.append(modal);
  }

  submit.addEventListener("click", () => { void run(); });
}
