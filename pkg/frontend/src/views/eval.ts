import { Api, ApiError } from "../api.js";
import { el } from "../render.js";
import type { EvalRun } from "../types.js";

const POLL_MS = 1000;

export function mountEvalView(root: HTMLElement, api: Api): void {
  const status = el("div", { class: "status" });
  const datasetList = el("div", { class: "dataset-list" });
  const runView = el("div", { class: "run-view" });

  const nameInput = el("input", { class: "dataset-name", placeholder: "dataset name" });
  const fileInput = el("input", { type: "file", accept: ".csv", class: "dataset-csv" });
  const uploadBtn = el("button", { class: "dataset-upload" }, "Upload dataset");

  root.replaceChildren(el("section", { class: "eval-view" },
    el("h2", {}, "Evaluation"),
    el("div", { class: "toolbar" }, nameInput, fileInput, uploadBtn),
    status, datasetList, runView,
  ));

  async function refreshDatasets(): Promise<void> {
    try {
      const listed = await api.listDatasets();
      datasetList.replaceChildren(el("table", { class: "dataset-table" },
        el("thead", {}, el("tr", {},
          el("th", {}, "Name"), el("th", {}, "Items"), el("th", {}, ""))),
        el("tbody", {}, ...listed.items.map((d) => {
          const runBtn = el("button", { class: "run-btn", "data-dataset": d.id }, "Run eval");
          runBtn.addEventListener("click", () => { void startRun(d.id); });
          return el("tr", {},
            el("td", {}, d.name), el("td", {}, String(d.item_count)),
            el("td", {}, runBtn));
        }))));
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
    }
  }

  async function startRun(datasetId: string): Promise<void> {
    try {
      const started = await api.startRun(datasetId);
      status.textContent = "Evaluation running…";
      await poll(started.run_id, datasetId);
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
    }
  }

  async function poll(runId: string, datasetId: string): Promise<void> {
    const run = await api.getRun(runId);
    if (run.status === "running") {
      setTimeout(() => { void poll(runId, datasetId); }, POLL_MS);
      return;
    }
    if (run.status === "failed") {
      status.textContent = "Evaluation run failed.";
      return;
    }
    status.textContent = "";
    await renderRun(run, datasetId);
  }

  async function renderRun(run: EvalRun, datasetId: string): Promise<void> {
    // Join run outputs with the dataset by item index so the reference sits
    // next to each output.
    const dataset = await api.getDataset(datasetId);
    const byIndex = new Map(dataset.items.map((item) => [item.index, item]));

    const summary = el("p", { class: "run-summary" },
      `Corpus ChrF++ — MT: ${run.corpus_chrfpp_mt.toFixed(2)}, ` +
      `post-edited: ${run.corpus_chrfpp_ape.toFixed(2)}` +
      (run.failed_items ? ` (${run.failed_items} failed items)` : ""));
    const exportLink = el("a", { class: "run-export", href: api.exportUrl(run.id) }, "Export CSV");

    const rows = run.per_item.map((item) => {
      const source = byIndex.get(item.index);
      return el("tr", { class: item.error ? "item-failed" : "item-ok" },
        el("td", { class: "col-index" }, String(item.index)),
        el("td", { class: "col-source" }, source?.source_text ?? ""),
        el("td", { class: "col-mt" }, item.mt_output),
        el("td", { class: "col-ape" }, item.post_edited_output),
        el("td", { class: "col-reference" }, source?.reference_text ?? ""),
        el("td", { class: "col-scores" },
          item.error ? `failed: ${item.error}`
            : `${item.chrfpp_mt.toFixed(2)} → ${item.chrfpp_ape.toFixed(2)}`));
    });

    runView.replaceChildren(summary, exportLink,
      el("table", { class: "run-table" },
        el("thead", {}, el("tr", {},
          el("th", {}, "#"), el("th", {}, "Source"), el("th", {}, "MT"),
          el("th", {}, "Post-edited"), el("th", {}, "Reference"),
          el("th", {}, "ChrF++"))),
        el("tbody", {}, ...rows)));
  }

  uploadBtn.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      status.textContent = "Choose a CSV file first.";
      return;
    }
    try {
      await api.uploadDataset(nameInput.value.trim() || "uploaded", await file.text());
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
      return;
    }
    await refreshDatasets();
  });

  void refreshDatasets();
}
