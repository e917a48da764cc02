// Client-side mirrors of the server's JSON payloads. Field names match the
// API verbatim; the UI never derives translations, diffs, or scores itself.

export type ByteSpan = [number, number];

export interface GlossaryEntry {
  id: number;
  source_term: string;
  target_text: string;
  created_at: string;
  updated_at: string;
}

export interface TmEntry {
  id: number;
  source_text: string;
  target_text: string;
  origin: "imported" | "saved_from_translation";
  created_at: string;
}

export interface GlossaryMatch {
  entry: { id: number; source_term: string; target_text: string };
  matched_gram: string[];
  input_span: ByteSpan;
}

export interface TmMatch {
  entry: { id: number; source_text: string; target_text: string; origin: string };
  score: number;
  rank: number;
}

export interface ChatMessage {
  role: "system" | "user" | "assistant";
  content: string;
}

export interface ReferenceHit {
  dataset_id: string;
  index: number;
  reference_text: string;
}

export interface TranslationPayload {
  source_text: string;
  mt_text: string;
  post_edited_text: string;
  glossary_matches: GlossaryMatch[];
  tm_matches: TmMatch[];
  mt_diff_spans: ByteSpan[];
  ape_diff_spans: ByteSpan[];
  prompt_transcript: ChatMessage[];
  timings_ms: Record<string, number>;
  degraded: boolean;
  error_detail: string | null;
  reference: ReferenceHit | null;
}

export interface EngineConfig {
  site_title: string;
  source_language_name: string;
  target_language_name: string;
  tm_retrieval_count: number;
  glossary_injection_cap: number;
  mt_backend: {
    kind: string;
    endpoint_url: string;
    auth_token_env: string;
    extra_params: Record<string, string>;
  };
  llm_backend: {
    kind: string;
    endpoint_url: string;
    model_id: string;
    auth_token_env: string;
    system_prompt: string;
    temperature: number;
    max_output_tokens: number;
    [extra: string]: unknown;
  };
}

export interface ListPage<T> {
  items: T[];
  page: number;
  page_size: number;
}

export interface ImportReport {
  inserted: number;
  rejected: [number, string][];
  warnings: [number, string][];
}

export interface EvalDatasetSummary {
  id: string;
  name: string;
  item_count: number;
  created_at: string;
}

export interface EvalItem {
  index: number;
  source_text: string;
  reference_text: string;
}

export interface EvalDataset {
  id: string;
  name: string;
  created_at: string;
  items: EvalItem[];
}

export interface EvalRunItem {
  index: number;
  mt_output: string;
  post_edited_output: string;
  chrfpp_mt: number;
  chrfpp_ape: number;
  error: string;
}

export interface EvalRun {
  id: string;
  dataset_id: string;
  status: "running" | "done" | "failed";
  per_item: EvalRunItem[];
  corpus_chrfpp_mt: number;
  corpus_chrfpp_ape: number;
  failed_items: number;
  started_at: string;
  finished_at: string;
}
