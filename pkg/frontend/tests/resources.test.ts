import { afterEach, describe, expect, it, vi } from "vitest";
import { Api } from "../src/api.js";
import { mountGlossaryView } from "../src/views/resources.js";
import { flush, mountRoot, stubFetch } from "./helpers.js";

afterEach(() => {
  vi.unstubAllGlobals();
});

function entry(id: number, term: string, target: string) {
  return { id, source_term: term, target_text: target, created_at: "", updated_at: "" };
}

describe("glossary view", () => {
  it("renders the server list and re-reads it after adding", async () => {
    const serverRows = [entry(1, "potable", "stret blong dring")];
    const calls = stubFetch({
      "GET /api/glossary": () => ({ items: serverRows, page: 1, page_size: 50 }),
      "POST /api/glossary": (call) => {
        const body = call.body as { source_term: string; target_text: string };
        // the server normalizes: the next list reflects its state, not the form
        serverRows.push(entry(2, body.source_term.trim(), body.target_text.trim()));
        return serverRows[serverRows.length - 1];
      },
    });
    const root = mountRoot();
    mountGlossaryView(root, new Api());
    await flush();
    expect(root.querySelectorAll("tbody tr")).toHaveLength(1);

    (root.querySelector(".add-source_term") as HTMLInputElement).value = "  water ";
    (root.querySelector(".add-target_text") as HTMLInputElement).value = "wota";
    (root.querySelector(".add-btn") as HTMLButtonElement).click();
    await flush();

    const rows = [...root.querySelectorAll("tbody tr")];
    expect(rows).toHaveLength(2);
    // table shows the server's trimmed value, not the optimistic local input
    expect(rows[1].querySelector(".cell-source_term")!.textContent).toBe("water");
    expect(calls.filter((c) => c.method === "GET").length).toBeGreaterThanOrEqual(2);
  });

  it("shows per-row rejections after a CSV import", async () => {
    stubFetch({
      "GET /api/glossary": { items: [], page: 1, page_size: 50 },
      "POST /api/glossary/import": {
        inserted: 2,
        rejected: [[3, "empty target_term"], [5, "wrong column count"]],
        warnings: [],
      },
    });
    const root = mountRoot();
    mountGlossaryView(root, new Api());
    await flush();

    const fileInput = root.querySelector(".csv-input") as HTMLInputElement;
    const file = new File(["term,target_term\na,b\n"], "glossary.csv", { type: "text/csv" });
    Object.defineProperty(fileInput, "files", { value: [file] });
    (root.querySelector(".csv-upload") as HTMLButtonElement).click();
    await flush();

    const report = root.querySelector(".import-report")!;
    expect(report.textContent).toContain("Imported 2 rows.");
    const rejected = [...report.querySelectorAll(".import-rejected li")].map((n) => n.textContent);
    expect(rejected).toEqual(["line 3: empty target_term", "line 5: wrong column count"]);
  });

  it("deletes only after confirmation and refreshes from the server", async () => {
    let serverRows = [entry(1, "potable", "stret blong dring")];
    stubFetch({
      "GET /api/glossary": () => ({ items: serverRows, page: 1, page_size: 50 }),
      "DELETE /api/glossary/1": () => {
        serverRows = [];
        return { deleted: 1 };
      },
    });
    vi.stubGlobal("confirm", vi.fn(() => true));
    const root = mountRoot();
    mountGlossaryView(root, new Api());
    await flush();

    (root.querySelector(".row-delete") as HTMLButtonElement).click();
    await flush();
    expect(root.querySelectorAll("tbody tr")).toHaveLength(0);
  });
});
