// Typed client for the chatscreen HTTP API. The UI computes no risk of its
// own: everything rendered comes from these response payloads.
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
    get unreachable() {
        return this.status === 0;
    }
    get unauthorized() {
        return this.status === 401;
    }
    get notFound() {
        return this.status === 404;
    }
}
export class ApiClient {
    constructor(config, fetchFn) {
        this.base = config.apiBaseUrl.replace(/\/+$/, "");
        this.token = config.token ?? null;
        this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
    }
    async request(method, path, body) {
        const headers = { "Content-Type": "application/json" };
        if (this.token) {
            headers["Authorization"] = `Bearer ${this.token}`;
        }
        let response;
        try {
            response = await this.fetchFn(`${this.base}${path}`, {
                method,
                headers,
                body: body === undefined ? undefined : JSON.stringify(body),
            });
        }
        catch {
            throw new ApiError(0, "server unreachable");
        }
        if (!response.ok) {
            let detail = response.statusText || `HTTP ${response.status}`;
            try {
                const payload = await response.json();
                if (payload && typeof payload.detail === "string") {
                    detail = payload.detail;
                }
            }
            catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(response.status, detail);
        }
        return (await response.json());
    }
    createSession() {
        return this.request("POST", "/v1/sessions");
    }
    postMessage(sessionId, text) {
        return this.request("POST", `/v1/sessions/${encodeURIComponent(sessionId)}/messages`, { text });
    }
    getReport(sessionId) {
        return this.request("GET", `/v1/sessions/${encodeURIComponent(sessionId)}/report`);
    }
    health() {
        return this.request("GET", "/v1/health");
    }
}
