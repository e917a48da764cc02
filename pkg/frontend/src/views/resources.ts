import { Api, ApiError } from "../api.js";
import { el } from "../render.js";
import type { ImportReport } from "../types.js";

interface ResourceSpec {
  kind: "glossary" | "tm";
  title: string;
  // column key order matches the server's entry fields
  columns: [string, string][];
  list(api: Api, page: number, q: string): Promise<{ items: Record<string, unknown>[] }>;
  put(api: Api, row: Record<string, string>, id?: number): Promise<unknown>;
  remove(api: Api, id: number): Promise<void>;
  importCsv(api: Api, csv: string): Promise<ImportReport>;
}

const GLOSSARY: ResourceSpec = {
  kind: "glossary",
  title: "Glossary",
  columns: [["source_term", "Term"], ["target_text", "Target"]],
  list: async (api, page, q) => ({ items: (await api.listGlossary(page, q)).items as unknown as Record<string, unknown>[] }),
  put: (api, row, id) => api.putGlossary({ id, source_term: row.source_term, target_text: row.target_text }),
  remove: (api, id) => api.deleteGlossary(id),
  importCsv: (api, csv) => api.importGlossary(csv),
};

const TM: ResourceSpec = {
  kind: "tm",
  title: "Translation memory",
  columns: [["source_text", "Source"], ["target_text", "Target"]],
  list: async (api, page, q) => ({ items: (await api.listTm(page, q)).items as unknown as Record<string, unknown>[] }),
  put: (api, row, id) => api.putTm({ id, source_text: row.source_text, target_text: row.target_text }),
  remove: (api, id) => api.deleteTm(id),
  importCsv: (api, csv) => api.importTm(csv),
};

export function mountGlossaryView(root: HTMLElement, api: Api): void {
  mountResourceView(root, api, GLOSSARY);
}

export function mountTmView(root: HTMLElement, api: Api): void {
  mountResourceView(root, api, TM);
}

function mountResourceView(root: HTMLElement, api: Api, spec: ResourceSpec): void {
  let page = 1;
  const search = el("input", { class: "search", placeholder: "Filter…" });
  const status = el("div", { class: "status" });
  const report = el("div", { class: "import-report" });
  const tbody = el("tbody", {});
  const table = el("table", { class: `resource-table ${spec.kind}-table` },
    el("thead", {}, el("tr", {},
      ...spec.columns.map(([, label]) => el("th", {}, label)),
      el("th", {}, ""))),
    tbody);

  const prev = el("button", { class: "page-prev" }, "‹ prev");
  const next = el("button", { class: "page-next" }, "next ›");
  const pageLabel = el("span", { class: "page-label" });

  const addInputs = spec.columns.map(([key]) =>
    el("input", { class: `add-${key}`, placeholder: key }));
  const addBtn = el("button", { class: "add-btn" }, "Add");

  const fileInput = el("input", { type: "file", accept: ".csv", class: "csv-input" });
  const uploadBtn = el("button", { class: "csv-upload" }, "Import CSV");

  root.replaceChildren(el("section", { class: `resource-view ${spec.kind}-view` },
    el("h2", {}, spec.title),
    el("div", { class: "toolbar" }, search, fileInput, uploadBtn),
    status, report, table,
    el("div", { class: "add-row" }, ...addInputs, addBtn),
    el("div", { class: "pager" }, prev, pageLabel, next),
  ));

  async function refresh(): Promise<void> {
    // Always re-read from the server after mutations — no optimistic state.
    try {
      const listed = await spec.list(api, page, search.value.trim());
      renderRows(listed.items);
      pageLabel.textContent = `page ${page}`;
      status.textContent = "";
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
    }
  }

  function renderRows(items: Record<string, unknown>[]): void {
    tbody.replaceChildren(...items.map((item) => {
      const tr = el("tr", { "data-id": String(item.id) });
      for (const [key] of spec.columns) {
        tr.append(el("td", { class: `cell-${key}` }, String(item[key])));
      }
      const edit = el("button", { class: "row-edit" }, "Edit");
      const del = el("button", { class: "row-delete" }, "Delete");
      edit.addEventListener("click", () => beginEdit(tr, item));
      del.addEventListener("click", async () => {
        if (!window.confirm("Delete this entry?")) return;
        await mutate(() => spec.remove(api, Number(item.id)));
      });
      tr.append(el("td", { class: "row-actions" }, edit, del));
      return tr;
    }));
  }

  function beginEdit(tr: HTMLTableRowElement, item: Record<string, unknown>): void {
    const fields: Record<string, HTMLInputElement> = {};
    for (const [key] of spec.columns) {
      const cell = tr.querySelector(`.cell-${key}`)!;
      const field = el("input", { class: `edit-${key}` });
      field.value = String(item[key]);
      fields[key] = field;
      cell.replaceChildren(field);
    }
    const actions = tr.querySelector(".row-actions")!;
    const save = el("button", { class: "row-save" }, "Save");
    save.addEventListener("click", async () => {
      const row: Record<string, string> = {};
      for (const [key] of spec.columns) row[key] = fields[key].value;
      await mutate(() => spec.put(api, row, Number(item.id)));
    });
    actions.replaceChildren(save);
  }

  async function mutate(op: () => Promise<unknown>): Promise<void> {
    try {
      await op();
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
      return;
    }
    await refresh();
  }

  addBtn.addEventListener("click", async () => {
    const row: Record<string, string> = {};
    spec.columns.forEach(([key], i) => { row[key] = addInputs[i].value; });
    await mutate(() => spec.put(api, row));
    addInputs.forEach((inp) => { inp.value = ""; });
  });

  uploadBtn.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      status.textContent = "Choose a CSV file first.";
      return;
    }
    const csv = await file.text();
    try {
      const result = await spec.importCsv(api, csv);
      renderReport(result);
    } catch (err) {
      status.textContent = err instanceof ApiError ? `Error: ${err.message}` : String(err);
      return;
    }
    await refresh();
  });

  function renderReport(result: ImportReport): void {
    report.replaceChildren(
      el("p", { class: "import-inserted" }, `Imported ${result.inserted} rows.`),
      ...(result.rejected.length
        ? [el("ul", { class: "import-rejected" }, ...result.rejected.map(([line, reason]) =>
            el("li", {}, `line ${line}: ${reason}`)))]
        : []),
      ...(result.warnings.length
        ? [el("ul", { class: "import-warnings" }, ...result.warnings.map(([line, reason]) =>
            el("li", {}, `line ${line}: ${reason}`)))]
        : []),
    );
  }

  prev.addEventListener("click", () => { if (page > 1) { page -= 1; void refresh(); } });
  next.addEventListener("click", () => { page += 1; void refresh(); });
  search.addEventListener("change", () => { page = 1; void refresh(); });

  void refresh();
}
