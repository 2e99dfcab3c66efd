import { debounce } from "./debounce.js";
import { panelLines } from "./panel.js";
// View-model for the live form. Holds what the user typed, what the latest
// fill response derived, and which fields the service suggests next; the DOM
// layer renders this state and feeds edits back in.
//
// Invariants:
//   - a field the user typed into is never overwritten by a fill response;
//   - derived displays always come from the latest applied fill response
//     (stale responses are dropped by sequence number);
//   - an edit while a request is in flight supersedes it.
export class FormController {
    client;
    schemaDoc = null;
    userValues = new Map();
    lastFill = null;
    fieldErrors = new Map();
    fillSeq = 0;
    listeners = [];
    scheduleFill;
    banner = { kind: "loading", text: "loading form…" };
    views = [];
    panel = [];
    formName = "";
    constructor(client, options = {}) {
        this.client = client;
        this.scheduleFill = debounce(() => {
            void this.runFill();
        }, options.debounceMs ?? 250);
    }
    subscribe(listener) {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }
    notify() {
        this.rebuildViews();
        for (const listener of this.listeners)
            listener();
    }
    async load() {
        let schema;
        try {
            schema = await this.client.schema();
        }
        catch (err) {
            this.banner = {
                kind: "error",
                text: `cannot reach the form service (${String(err)})`,
            };
            this.notify();
            return;
        }
        this.schemaDoc = schema;
        this.formName = schema.name;
        const analysis = await this.client.analysis();
        this.panel = analysis ? panelLines(analysis, schema.fields.length) : [];
        this.notify();
        // an immediate empty fill seeds the suggestion badges and the banner
        await this.runFill();
    }
    // Raw text straight from the input; empty string clears the field.
    setField(id, raw) {
        if (!this.schemaDoc)
            return;
        if (raw === "") {
            this.userValues.delete(id);
        }
        else {
            this.userValues.set(id, raw);
        }
        this.fieldErrors.delete(id);
        this.fillSeq++; // any fill already in flight is now stale
        this.notify();
        this.scheduleFill();
    }
    clearField(id) {
        this.setField(id, "");
    }
    userEntered(id) {
        return this.userValues.has(id);
    }
    payload() {
        const out = {};
        for (const [id, raw] of this.userValues) {
            const decl = this.schemaDoc?.fields.find((f) => f.id === id);
            if (decl && decl.kind !== "enum") {
                const num = Number(raw);
                // non-numeric text goes through as-is so the service's type error
                // comes back as the inline message
                out[id] = Number.isFinite(num) && raw.trim() !== "" ? num : raw;
            }
            else {
                out[id] = raw;
            }
        }
        return out;
    }
    async runFill() {
        if (!this.schemaDoc)
            return;
        const seq = ++this.fillSeq;
        const result = await this.client.fill(this.payload());
        if (seq !== this.fillSeq) {
            return; // a newer edit superseded this request
        }
        if (result.ok) {
            this.lastFill = result.report;
            this.fieldErrors.clear();
            this.banner =
                result.report.status === "filled"
                    ? { kind: "complete", text: "complete" }
                    : {
                        kind: "incomplete",
                        text: result.report.suggestions.length > 0
                            ? `incomplete — try entering: ${result.report.suggestions.join(", ")}`
                            : "incomplete",
                    };
        }
        else {
            // user input survives; derived ghosts would be stale, so drop them
            this.lastFill = null;
            if (result.error.field) {
                this.fieldErrors.set(result.error.field, result.error.message);
            }
            this.banner = { kind: "error", text: result.error.message };
        }
        this.notify();
    }
    rebuildViews() {
        if (!this.schemaDoc) {
            this.views = [];
            return;
        }
        const fill = this.lastFill;
        const suggestions = new Set(fill?.suggestions ?? []);
        this.views = this.schemaDoc.fields.map((decl) => {
            const mandatory = this.schemaDoc.mandatory.includes(decl.id);
            const error = this.fieldErrors.get(decl.id) ?? null;
            const suggested = suggestions.has(decl.id);
            if (this.userValues.has(decl.id)) {
                return {
                    ...declView(decl, mandatory),
                    state: "user",
                    display: this.userValues.get(decl.id),
                    suggested: false,
                    error,
                };
            }
            const filled = fill?.values[decl.id];
            if (filled && filled.origin === "derived") {
                return {
                    ...declView(decl, mandatory),
                    state: "derived",
                    display: String(filled.value),
                    suggested: false,
                    error,
                };
            }
            return {
                ...declView(decl, mandatory),
                state: suggested ? "needed" : "empty",
                display: "",
                suggested,
                error,
            };
        });
    }
}
function declView(decl, mandatory) {
    return {
        id: decl.id,
        label: decl.label,
        kind: decl.kind,
        values: decl.values,
        min: decl.min,
        max: decl.max,
        mandatory,
    };
}
