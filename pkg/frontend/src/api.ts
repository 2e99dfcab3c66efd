// Typed client for the form service. The fetch implementation is injected
// so tests can run without a server.

export type FieldKind = "number" | "integer" | "enum";

export interface FieldDecl {
  id: string;
  label: string;
  kind: FieldKind;
  values?: string[];
  min?: number;
  max?: number;
}

export interface SchemaDoc {
  name: string;
  fields: FieldDecl[];
  rules: { target: string; args: string[]; mode: string; expr: string }[];
  graph: { vertices: string[]; edges: [string, string][] };
  mandatory: string[];
}

export interface CycleDoc {
  members: string[];
  witness: string[];
}

export interface AnalysisDoc {
  sources: string[];
  minimal_cycles: CycleDoc[];
  sccs: string[][];
  source_components: string[][];
  greedy_min_filling: string[];
  exact_min_fillings?: string[][];
  min_p_filling: string[];
  min_p_filling_cardinality: number;
  mandatory: string[];
  partial_rules_reduce_minimum: boolean;
}

export interface FilledValue {
  value: number | string;
  origin: "user" | "derived";
}

export interface FillDoc {
  values: Record<string, FilledValue>;
  trace: { target: string; args: string[]; stage: number }[];
  status: "filled" | "incomplete";
  missing: string[];
  suggestions: string[];
}

export interface ApiErrorDoc {
  code: "unknown_field" | "type_error" | "parse_error" | "internal";
  message: string;
  field?: string;
}

export type FillResult =
  | { ok: true; report: FillDoc }
  | { ok: false; status: number; error: ApiErrorDoc };

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string }
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

export interface ServiceClient {
  schema(): Promise<SchemaDoc>;
  analysis(): Promise<AnalysisDoc | null>;
  fill(values: Record<string, unknown>): Promise<FillResult>;
}

export class ApiClient implements ServiceClient {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  async schema(): Promise<SchemaDoc> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/schema`);
    if (!resp.ok) {
      throw new Error(`schema request failed with status ${resp.status}`);
    }
    return (await resp.json()) as SchemaDoc;
  }

  // Analysis is advisory; the form works without it, so failures map to null
  // and the caller hides the panel.
  async analysis(): Promise<AnalysisDoc | null> {
    try {
      const resp = await this.fetchFn(`${this.baseUrl}/api/analysis`);
      if (!resp.ok) return null;
      return (await resp.json()) as AnalysisDoc;
    } catch {
      return null;
    }
  }

  async fill(values: Record<string, unknown>): Promise<FillResult> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/fill`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ values }),
    });
    const doc = await resp.json();
    if (resp.ok) {
      return { ok: true, report: doc as FillDoc };
    }
    return { ok: false, status: resp.status, error: doc as ApiErrorDoc };
  }
}
