import assert from "node:assert/strict";
import test from "node:test";
import { ViewerModel } from "../src/model.js";
import { cellKey } from "../src/types.js";
import { StubClient, WIRE } from "./stub.js";
async function freshModel(client = new StubClient()) {
    const model = new ViewerModel(client);
    await model.refresh();
    return model;
}
test("displayed text equals /document text byte-for-byte", async () => {
    const model = await freshModel();
    assert.equal(model.displayedText, WIRE.text);
});
test("hovering the growing fragment highlights exactly the two provenance cells", async () => {
    const client = new StubClient();
    const model = await freshModel(client);
    await model.hoverFragment(0);
    assert.deepEqual(model.highlightedCellKeys, new Set([
        cellKey({ dataset: "tableData", row: 0, field: "time_s" }),
        cellKey({ dataset: "tableData", row: 1, field: "time_s" }),
    ]));
    assert.ok(client.calls.includes("GET /provenance/0"));
});
test("linked fragments are marked distinctly from the hovered one", async () => {
    const model = await freshModel();
    await model.hoverFragment(0);
    assert.equal(model.hover?.fragmentId, 0);
    assert.deepEqual(model.linkedFragmentIds, new Set([1]));
    assert.ok(!model.linkedFragmentIds.has(0));
});
test("no highlight when nothing is hovered", async () => {
    const model = await freshModel();
    assert.equal(model.highlightedCellKeys.size, 0);
    await model.hoverFragment(0);
    model.unhover();
    assert.equal(model.highlightedCellKeys.size, 0);
    assert.equal(model.linkedFragmentIds.size, 0);
});
test("unknown fragment is inert (404 -> no highlight)", async () => {
    const model = await freshModel();
    await model.hoverFragment(42);
    assert.equal(model.hover, null);
    assert.equal(model.highlightedCellKeys.size, 0);
});
test("action enablement follows the session-state badge", async () => {
    const client = new StubClient();
    const model = await freshModel(client);
    assert.deepEqual(model.enabledActions, ["select"]);
    client.session = { state: "awaiting_validation", registry: [] };
    await model.refresh();
    assert.deepEqual(model.enabledActions, ["approve", "reject"]);
    client.session = { state: "mismatch_decision", registry: [] };
    await model.refresh();
    assert.deepEqual(model.enabledActions, ["reject", "revise_goal"]);
    client.session = { state: "synthesizing", registry: [] };
    await model.refresh();
    assert.deepEqual(model.enabledActions, []);
});
test("acting re-syncs state from the service responses alone", async () => {
    const client = new StubClient();
    client.session = { state: "awaiting_validation", registry: [] };
    const model = await freshModel(client);
    client.script = [{ state: "awaiting_selection", registry: [] }];
    await model.act("approve");
    assert.equal(model.stateBadge, "awaiting_selection");
    const tail = client.calls.slice(-3);
    assert.deepEqual(tail, ["POST /approve", "GET /document", "GET /session"]);
});
test("controls are disabled while a mutation is in flight", async () => {
    const client = new StubClient();
    const model = await freshModel(client);
    const pending = model.act("select", { start: 41, end: 43 });
    assert.equal(model.busy, true);
    assert.deepEqual(model.enabledActions, []);
    await pending;
    assert.equal(model.busy, false);
});
test("409 surfaces as 'action unavailable in current state'", async () => {
    const client = new StubClient();
    const model = await freshModel(client);
    client.failWith = 409;
    await model.act("approve");
    assert.equal(model.lastError, "action unavailable in current state");
});
test("select posts the requested span", async () => {
    const client = new StubClient();
    const model = await freshModel(client);
    client.script = [{ state: "synthesizing", registry: [] }];
    await model.act("select", { start: 41, end: 43 });
    assert.ok(client.calls.includes("POST /select"));
    assert.equal(model.stateBadge, "synthesizing");
});
test("mismatch details come straight from the session payload", async () => {
    const client = new StubClient();
    client.session = {
        state: "mismatch_decision", registry: [],
        target: "does not further improve", sPrime: "further improves",
    };
    const model = await freshModel(client);
    assert.equal(model.session?.sPrime, "further improves");
    assert.deepEqual(model.enabledActions, ["reject", "revise_goal"]);
});
