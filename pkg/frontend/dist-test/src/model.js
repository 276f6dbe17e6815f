/** Viewer state. Holds no document logic: text, highlights, groups, and the
 * action set are all taken verbatim from service responses. */
import { ServiceError } from "./client.js";
import { cellKey, } from "./types.js";
const ACTIONS_BY_STATE = {
    awaiting_selection: ["select"],
    synthesizing: [],
    awaiting_validation: ["approve", "reject"],
    mismatch_decision: ["reject", "revise_goal"],
};
export class ViewerModel {
    constructor(client) {
        this.client = client;
        this.document = null;
        this.session = null;
        this.hover = null;
        this.busy = false;
        this.lastError = null;
        this.listeners = [];
    }
    onChange(listener) {
        this.listeners.push(listener);
    }
    emit() {
        for (const listener of this.listeners)
            listener();
    }
    /** The paragraph text exactly as served; never reassembled locally. */
    get displayedText() {
        return this.document?.text ?? "";
    }
    get stateBadge() {
        return this.session?.state ?? "disconnected";
    }
    get enabledActions() {
        if (this.busy || this.session === null)
            return [];
        return ACTIONS_BY_STATE[this.session.state];
    }
    get highlightedCellKeys() {
        return new Set((this.hover?.cells ?? []).map(cellKey));
    }
    get linkedFragmentIds() {
        return new Set(this.hover?.linkedFragments ?? []);
    }
    async refresh() {
        this.document = await this.client.getDocument();
        this.session = await this.client.getSession();
        this.emit();
    }
    /** Hover a fragment: highlights exactly the provenance cells the service
     * reports and marks co-grouped fragments. Unknown ids stay inert. */
    async hoverFragment(fragmentId) {
        const provenance = await this.client.getProvenance(fragmentId);
        if (provenance === null) {
            this.hover = null;
        }
        else {
            this.hover = {
                fragmentId: provenance.fragmentId,
                cells: provenance.cells,
                linkedFragments: provenance.linkedFragments,
            };
        }
        this.emit();
    }
    unhover() {
        this.hover = null;
        this.emit();
    }
    /** Run an authoring action; controls stay disabled until the server
     * responds, then the view re-syncs from /session and /document. */
    async act(action, span) {
        if (this.busy)
            return;
        this.busy = true;
        this.lastError = null;
        this.emit();
        try {
            switch (action) {
                case "select":
                    await this.client.select(span ? { span } : {});
                    break;
                case "approve":
                    await this.client.approve();
                    break;
                case "reject":
                    await this.client.reject();
                    break;
                case "revise_goal":
                    await this.client.reviseGoal();
                    break;
            }
        }
        catch (err) {
            if (err instanceof ServiceError && err.status === 409) {
                this.lastError = "action unavailable in current state";
            }
            else {
                this.lastError = err instanceof Error ? err.message : String(err);
            }
        }
        finally {
            this.busy = false;
        }
        await this.refresh();
    }
}
