/** Service access. The viewer talks to the document service only through
 * this interface, so tests can drive it from recorded payloads. */

import {
  ProvenanceResponse, SessionPayload, Span, WireDocument,
} from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export interface ServiceClient {
  getDocument(): Promise<WireDocument>;
  getSession(): Promise<SessionPayload>;
  /** Resolves null for an unknown fragment (404). */
  getProvenance(fragmentId: number): Promise<ProvenanceResponse | null>;
  select(target: { span?: Span; fragmentId?: number }): Promise<SessionPayload>;
  approve(): Promise<SessionPayload>;
  reject(): Promise<SessionPayload>;
  reviseGoal(): Promise<SessionPayload>;
}

export class HttpServiceClient implements ServiceClient {
  constructor(private baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = (payload as { error?: string }).error ?? response.statusText;
      throw new ServiceError(response.status, detail);
    }
    return payload as T;
  }

  getDocument(): Promise<WireDocument> {
    return this.request("GET", "/document");
  }

  getSession(): Promise<SessionPayload> {
    return this.request("GET", "/session");
  }

  async getProvenance(fragmentId: number): Promise<ProvenanceResponse | null> {
    try {
      return await this.request("GET", `/provenance/${fragmentId}`);
    } catch (err) {
      if (err instanceof ServiceError && err.status === 404) return null;
      throw err;
    }
  }

  select(target: { span?: Span; fragmentId?: number }): Promise<SessionPayload> {
    return this.request("POST", "/select", target);
  }

  approve(): Promise<SessionPayload> {
    return this.request("POST", "/approve");
  }

  reject(): Promise<SessionPayload> {
    return this.request("POST", "/reject");
  }

  reviseGoal(): Promise<SessionPayload> {
    return this.request("POST", "/revise-goal");
  }
}
