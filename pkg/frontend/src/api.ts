import type {
  EngineConfig, EvalDataset, EvalDatasetSummary, EvalRun, GlossaryEntry,
  ImportReport, ListPage, TmEntry, TranslationPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
  }
}

interface RequestOptions {
  json?: unknown;
  rawBody?: string;
  query?: Record<string, string>;
}

export class Api {
  // Entered once in the UI and held in memory only; never persisted.
  private adminToken: string | null = null;

  constructor(private baseUrl = "") {}

  setAdminToken(token: string): void {
    this.adminToken = token.trim() || null;
  }

  hasAdminToken(): boolean {
    return this.adminToken !== null;
  }

  private async request<T>(method: string, path: string, opts: RequestOptions = {}): Promise<T> {
    let url = this.baseUrl + path;
    if (opts.query) url += "?" + new URLSearchParams(opts.query).toString();
    const headers: Record<string, string> = {};
    if (this.adminToken) headers["Authorization"] = `Bearer ${this.adminToken}`;
    let body: string | undefined;
    if (opts.json !== undefined) {
      headers["Content-Type"] = "application/json";
      body = JSON.stringify(opts.json);
    } else if (opts.rawBody !== undefined) {
      headers["Content-Type"] = "text/csv";
      body = opts.rawBody;
    }
    const res = await fetch(url, { method, headers, body });
    const text = await res.text();
    if (!res.ok) {
      let code = "unknown";
      let message = res.statusText;
      let detail: unknown = null;
      try {
        const envelope = JSON.parse(text).error;
        code = envelope.code;
        message = envelope.message;
        detail = envelope.detail ?? null;
      } catch {
        // non-envelope error body; keep the status text
      }
      throw new ApiError(res.status, code, message, detail);
    }
    return text ? JSON.parse(text) : (undefined as T);
  }

  translate(sourceText: string, mtOnly = false): Promise<TranslationPayload> {
    return this.request("POST", "/api/translate", {
      json: { source_text: sourceText, mt_only: mtOnly },
    });
  }

  saveTm(sourceText: string, targetText: string): Promise<TmEntry> {
    return this.request("POST", "/api/tm/save", {
      json: { source_text: sourceText, target_text: targetText },
    });
  }

  listGlossary(page = 1, q = ""): Promise<ListPage<GlossaryEntry>> {
    return this.request("GET", "/api/glossary", {
      query: { page: String(page), ...(q ? { q } : {}) },
    });
  }

  putGlossary(entry: { id?: number; source_term: string; target_text: string }): Promise<GlossaryEntry> {
    return this.request("POST", "/api/glossary", { json: entry });
  }

  deleteGlossary(id: number): Promise<void> {
    return this.request("DELETE", `/api/glossary/${id}`);
  }

  importGlossary(csv: string): Promise<ImportReport> {
    return this.request("POST", "/api/glossary/import", { rawBody: csv });
  }

  listTm(page = 1, q = ""): Promise<ListPage<TmEntry>> {
    return this.request("GET", "/api/tm", {
      query: { page: String(page), ...(q ? { q } : {}) },
    });
  }

  putTm(entry: { id?: number; source_text: string; target_text: string }): Promise<TmEntry> {
    return this.request("POST", "/api/tm", { json: entry });
  }

  deleteTm(id: number): Promise<void> {
    return this.request("DELETE", `/api/tm/${id}`);
  }

  importTm(csv: string): Promise<ImportReport> {
    return this.request("POST", "/api/tm/import", { rawBody: csv });
  }

  getConfig(): Promise<EngineConfig> {
    return this.request("GET", "/api/config");
  }

  putConfig(patch: Record<string, unknown>): Promise<EngineConfig> {
    return this.request("PUT", "/api/config", { json: patch });
  }

  listDatasets(): Promise<{ items: EvalDatasetSummary[] }> {
    return this.request("GET", "/api/eval/datasets");
  }

  getDataset(id: string): Promise<EvalDataset> {
    return this.request("GET", `/api/eval/datasets/${id}`);
  }

  uploadDataset(name: string, csv: string): Promise<EvalDatasetSummary> {
    return this.request("POST", "/api/eval/datasets", { rawBody: csv, query: { name } });
  }

  startRun(datasetId: string): Promise<{ run_id: string }> {
    return this.request("POST", "/api/eval/run", { json: { dataset_id: datasetId } });
  }

  getRun(runId: string): Promise<EvalRun> {
    return this.request("GET", `/api/eval/runs/${runId}`);
  }

  exportUrl(runId: string): string {
    return `${this.baseUrl}/api/eval/runs/${runId}/export`;
  }
}
