// In-memory stand-in for the form service, implementing the documented
// contract for the three-field weight form: same field declarations, same
// stage-synchronous derivation, same suggestion shape. Tests drive the
// controller against this instead of a live server.

import type {
  AnalysisDoc,
  FillDoc,
  FillResult,
  FilledValue,
  SchemaDoc,
  ServiceClient,
} from "../src/api.js";

export const weightSchema: SchemaDoc = {
  name: "weight",
  fields: [
    { id: "Sex", label: "Sex (1: male, 0: female)", kind: "integer", min: 0, max: 1 },
    { id: "Age", label: "Age in years", kind: "integer", min: 1, max: 100 },
    { id: "Height", label: "Height in cm", kind: "integer", min: 30, max: 250 },
  ],
  rules: [
    { target: "Age", args: ["Height"], mode: "complete", expr: "…" },
    { target: "Height", args: ["Age", "Sex"], mode: "complete", expr: "…" },
  ],
  graph: {
    vertices: ["Age", "Height", "Sex"],
    edges: [
      ["Age", "Height"],
      ["Height", "Age"],
      ["Sex", "Height"],
    ],
  },
  mandatory: ["Sex"],
};

export const weightAnalysis: AnalysisDoc = {
  sources: ["Sex"],
  minimal_cycles: [{ members: ["Age", "Height"], witness: ["Age", "Height"] }],
  sccs: [["Age", "Height"], ["Sex"]],
  source_components: [["Sex"]],
  greedy_min_filling: ["Age", "Sex"],
  exact_min_fillings: [
    ["Age", "Sex"],
    ["Height", "Sex"],
  ],
  min_p_filling: ["Sex"],
  min_p_filling_cardinality: 1,
  mandatory: ["Sex"],
  partial_rules_reduce_minimum: false,
};

function ageFromHeight(height: number): number {
  if (30 <= height && height <= 160) {
    return Math.floor(((height - 30) / 130) * 16 + 1);
  }
  if (height > 160) return 40;
  return 1;
}

function heightFromAgeSex(age: number, sex: number): number {
  if (age > 16) return 162 + 16 * sex;
  return Math.floor(((age - 1) / 16) * 130 + 30.5);
}

const bounds: Record<string, [number, number]> = {
  Sex: [0, 1],
  Age: [1, 100],
  Height: [30, 250],
};

export class FakeWeightService implements ServiceClient {
  fillCalls: Record<string, unknown>[] = [];

  async schema(): Promise<SchemaDoc> {
    return weightSchema;
  }

  async analysis(): Promise<AnalysisDoc | null> {
    return weightAnalysis;
  }

  async fill(values: Record<string, unknown>): Promise<FillResult> {
    this.fillCalls.push(values);
    const state = new Map<string, FilledValue>();
    for (const [id, value] of Object.entries(values)) {
      if (!(id in bounds)) {
        return this.error(400, "unknown_field", `unknown field '${id}'`, id);
      }
      if (typeof value !== "number" || !Number.isInteger(value)) {
        return this.error(400, "type_error", `${id} must be an integer`, id);
      }
      const [lo, hi] = bounds[id];
      if (value < lo) {
        return this.error(400, "type_error", `${id} must be >= ${lo}`, id);
      }
      if (value > hi) {
        return this.error(400, "type_error", `${id} must be <= ${hi}`, id);
      }
      state.set(id, { value, origin: "user" });
    }

    const trace: FillDoc["trace"] = [];
    for (let stage = 1; ; stage++) {
      const prev = new Map(state);
      let derived = false;
      if (!state.has("Age") && prev.has("Height")) {
        const height = prev.get("Height")!.value as number;
        state.set("Age", { value: ageFromHeight(height), origin: "derived" });
        trace.push({ target: "Age", args: ["Height"], stage });
        derived = true;
      }
      if (!state.has("Height") && prev.has("Age") && prev.has("Sex")) {
        const age = prev.get("Age")!.value as number;
        const sex = prev.get("Sex")!.value as number;
        state.set("Height", {
          value: heightFromAgeSex(age, sex),
          origin: "derived",
        });
        trace.push({ target: "Height", args: ["Age", "Sex"], stage });
        derived = true;
      }
      if (!derived) break;
    }

    const missing = ["Age", "Height", "Sex"].filter((id) => !state.has(id));
    const suggestions: string[] = [];
    if (missing.length > 0) {
      if (!state.has("Sex")) suggestions.push("Sex");
      if (!state.has("Age") && !state.has("Height")) suggestions.push("Age");
      suggestions.sort();
    }
    const doc: FillDoc = {
      values: Object.fromEntries(
        [...state.entries()].sort(([a], [b]) => (a < b ? -1 : 1))
      ),
      trace,
      status: missing.length === 0 ? "filled" : "incomplete",
      missing,
      suggestions,
    };
    return { ok: true, report: doc };
  }

  private error(
    status: number,
    code: "unknown_field" | "type_error",
    message: string,
    field: string
  ): FillResult {
    return { ok: false, status, error: { code, message, field } };
  }
}
