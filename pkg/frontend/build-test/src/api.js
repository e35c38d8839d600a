// Typed client for the engine's JSON-over-HTTP endpoints. The UI mutates
// model state exclusively through commit().
export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class HttpEngineApi {
    constructor(base = "") {
        this.base = base;
    }
    async request(path, init) {
        const resp = await fetch(this.base + path, init);
        let data = {};
        try {
            data = await resp.json();
        }
        catch {
            // non-JSON body: fall through to status handling
        }
        if (!resp.ok) {
            const message = data.error ?? resp.statusText;
            throw new ApiError(resp.status, message);
        }
        return data;
    }
    post(path, body) {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
    }
    convert(pinyin, k) {
        return this.post("/convert", { pinyin, k });
    }
    commit(pinyin, text) {
        return this.post("/commit", { pinyin, text });
    }
    stats(top) {
        return this.request(`/stats?top=${top}`);
    }
}
