/** Service access. The viewer talks to the document service only through
 * this interface, so tests can drive it from recorded payloads. */
export class ServiceError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
export class HttpServiceClient {
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async request(method, path, body) {
        const response = await fetch(this.baseUrl + path, {
            method,
            headers: body === undefined ? {} : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await response.json().catch(() => ({}));
        if (!response.ok) {
            const detail = payload.error ?? response.statusText;
            throw new ServiceError(response.status, detail);
        }
        return payload;
    }
    getDocument() {
        return this.request("GET", "/document");
    }
    getSession() {
        return this.request("GET", "/session");
    }
    async getProvenance(fragmentId) {
        try {
            return await this.request("GET", `/provenance/${fragmentId}`);
        }
        catch (err) {
            if (err instanceof ServiceError && err.status === 404)
                return null;
            throw err;
        }
    }
    select(target) {
        return this.request("POST", "/select", target);
    }
    approve() {
        return this.request("POST", "/approve");
    }
    reject() {
        return this.request("POST", "/reject");
    }
    reviseGoal() {
        return this.request("POST", "/revise-goal");
    }
}
