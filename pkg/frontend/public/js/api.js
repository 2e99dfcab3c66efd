// Typed client for the form service. The fetch implementation is injected
// so tests can run without a server.
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (...args) => fetch(...args)) {
        this.baseUrl = baseUrl.replace(/\/$/, "");
        this.fetchFn = fetchFn;
    }
    async schema() {
        const resp = await this.fetchFn(`${this.baseUrl}/api/schema`);
        if (!resp.ok) {
            throw new Error(`schema request failed with status ${resp.status}`);
        }
        return (await resp.json());
    }
    // Analysis is advisory; the form works without it, so failures map to null
    // and the caller hides the panel.
    async analysis() {
        try {
            const resp = await this.fetchFn(`${this.baseUrl}/api/analysis`);
            if (!resp.ok)
                return null;
            return (await resp.json());
        }
        catch {
            return null;
        }
    }
    async fill(values) {
        const resp = await this.fetchFn(`${this.baseUrl}/api/fill`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ values }),
        });
        const doc = await resp.json();
        if (resp.ok) {
            return { ok: true, report: doc };
        }
        return { ok: false, status: resp.status, error: doc };
    }
}
