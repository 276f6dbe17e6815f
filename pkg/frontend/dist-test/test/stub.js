/** Recorded service payloads (the timing-table demo project) and a scripted
 * client stub that serves them without any network. */
import { ServiceError } from "../src/client.js";
export const WIRE = {
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
export const PROVENANCE = {
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
export class StubClient {
    constructor() {
        this.session = { state: "awaiting_selection", registry: [] };
        this.document = WIRE;
        this.calls = [];
        /** Scripted session responses for mutations, consumed in order. */
        this.script = [];
        this.failWith = null;
    }
    async getDocument() {
        this.calls.push("GET /document");
        return this.document;
    }
    async getSession() {
        this.calls.push("GET /session");
        return this.session;
    }
    async getProvenance(fragmentId) {
        this.calls.push(`GET /provenance/${fragmentId}`);
        return PROVENANCE[fragmentId] ?? null;
    }
    mutate(name) {
        this.calls.push(`POST /${name}`);
        if (this.failWith !== null) {
            return Promise.reject(new ServiceError(this.failWith, "scripted failure"));
        }
        const next = this.script.shift();
        if (next)
            this.session = next;
        return Promise.resolve(this.session);
    }
    select(_target) {
        return this.mutate("select");
    }
    approve() {
        return this.mutate("approve");
    }
    reject() {
        return this.mutate("reject");
    }
    reviseGoal() {
        return this.mutate("revise-goal");
    }
}
