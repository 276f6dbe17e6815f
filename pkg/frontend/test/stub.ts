/** Recorded service payloads (the timing-table demo project) and a scripted
 * client stub that serves them without any network. */

import { ServiceClient, ServiceError } from "../src/client.js";
import {
  ProvenanceResponse, SessionPayload, Span, WireDocument,
} from "../src/types.js";

export const WIRE: WireDocument = {
  formatVersion: 1,
  text: "The training time per epoch growing from 67 seconds to 106 seconds.",
  fragments: [
    {
      id: 0, start: 28, end: 35, text: "growing",
      cells: [
        { dataset: "tableData", row: 0, field: "time_s" },
        { dataset: "tableData", row: 1, field: "time_s" },
      ],
    },
    {
      id: 1, start: 41, end: 43, text: "67",
      cells: [{ dataset: "tableData", row: 0, field: "time_s" }],
    },
  ],
  groups: [[0, 1]],
  datasets: {
    tableData: [
      { model: "LSTM", time_s: 67 },
      { model: "BiLSTM", time_s: 106 },
      { model: "CNN", time_s: 52 },
      { model: "S-LSTM", time_s: 80 },
    ],
  },
};

export const PROVENANCE: Record<number, ProvenanceResponse> = {
  0: {
    fragmentId: 0,
    cells: [
      { dataset: "tableData", row: 0, field: "time_s" },
      { dataset: "tableData", row: 1, field: "time_s" },
    ],
    linkedFragments: [1],
  },
  1: {
    fragmentId: 1,
    cells: [{ dataset: "tableData", row: 0, field: "time_s" }],
    linkedFragments: [0],
  },
};

export class StubClient implements ServiceClient {
  session: SessionPayload = { state: "awaiting_selection", registry: [] };
  document: WireDocument = WIRE;
  calls: string[] = [];
  /** Scripted session responses for mutations, consumed in order. */
  script: SessionPayload[] = [];
  failWith: number | null = null;

  async getDocument(): Promise<WireDocument> {
    this.calls.push("GET /document");
    return this.document;
  }

  async getSession(): Promise<SessionPayload> {
    this.calls.push("GET /session");
    return this.session;
  }

  async getProvenance(fragmentId: number): Promise<ProvenanceResponse | null> {
    this.calls.push(`GET /provenance/${fragmentId}`);
    return PROVENANCE[fragmentId] ?? null;
  }

  private mutate(name: string): Promise<SessionPayload> {
    this.calls.push(`POST /${name}`);
    if (this.failWith !== null) {
      return Promise.reject(new ServiceError(this.failWith, "scripted failure"));
    }
    const next = this.script.shift();
    if (next) this.session = next;
    return Promise.resolve(this.session);
  }

  select(_target: { span?: Span; fragmentId?: number }): Promise<SessionPayload> {
    return this.mutate("select");
  }

  approve(): Promise<SessionPayload> {
    return this.mutate("approve");
  }

  reject(): Promise<SessionPayload> {
    return this.mutate("reject");
  }

  reviseGoal(): Promise<SessionPayload> {
    return this.mutate("revise-goal");
  }
}
