/** Viewer state. Holds no document logic: text, highlights, groups, and the
 * action set are all taken verbatim from service responses. */

import { ServiceClient, ServiceError } from "./client.js";
import {
  AuthoringAction, Cell, SessionPayload, SessionStateName, Span,
  WireDocument, cellKey,
} from "./types.js";

export interface HoverState {
  fragmentId: number;
  cells: Cell[];
  linkedFragments: number[];
}

const ACTIONS_BY_STATE: Record<SessionStateName, AuthoringAction[]> = {
  awaiting_selection: ["select"],
  synthesizing: [],
  awaiting_validation: ["approve", "reject"],
  mismatch_decision: ["reject", "revise_goal"],
};

export class ViewerModel {
  document: WireDocument | null = null;
  session: SessionPayload | null = null;
  hover: HoverState | null = null;
  busy = false;
  lastError: string | null = null;

  private listeners: Array<() => void> = [];

  constructor(private client: ServiceClient) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  /** The paragraph text exactly as served; never reassembled locally. */
  get displayedText(): string {
    return this.document?.text ?? "";
  }

  get stateBadge(): SessionStateName | "disconnected" {
    return this.session?.state ?? "disconnected";
  }

  get enabledActions(): AuthoringAction[] {
    if (this.busy || this.session === null) return [];
    return ACTIONS_BY_STATE[this.session.state];
  }

  get highlightedCellKeys(): Set<string> {
    return new Set((this.hover?.cells ?? []).map(cellKey));
  }

  get linkedFragmentIds(): Set<number> {
    return new Set(this.hover?.linkedFragments ?? []);
  }

  async refresh(): Promise<void> {
    this.document = await this.client.getDocument();
    this.session = await this.client.getSession();
    this.emit();
  }

  /** Hover a fragment: highlights exactly the provenance cells the service
   * reports and marks co-grouped fragments. Unknown ids stay inert. */
  async hoverFragment(fragmentId: number): Promise<void> {
    const provenance = await this.client.getProvenance(fragmentId);
    if (provenance === null) {
      this.hover = null;
    } else {
      this.hover = {
        fragmentId: provenance.fragmentId,
        cells: provenance.cells,
        linkedFragments: provenance.linkedFragments,
      };
    }
    this.emit();
  }

  unhover(): void {
    this.hover = null;
    this.emit();
  }

  /** Run an authoring action; controls stay disabled until the server
   * responds, then the view re-syncs from /session and /document. */
  async act(action: AuthoringAction, span?: Span): Promise<void> {
    if (this.busy) return;
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
    } catch (err) {
      if (err instanceof ServiceError && err.status === 409) {
        this.lastError = "action unavailable in current state";
      } else {
        this.lastError = err instanceof Error ? err.message : String(err);
      }
    } finally {
      this.busy = false;
    }
    await this.refresh();
  }
}
