/** Wire format and endpoint payloads served by the document service. */

export interface Cell {
  dataset: string;
  row: number;
  field: string;
}

export interface WireFragment {
  id: number;
  start: number;
  end: number;
  text: string;
  cells: Cell[];
}

export interface WireDocument {
  formatVersion: number;
  text: string;
  fragments: WireFragment[];
  groups: number[][];
  datasets: Record<string, Record<string, unknown>[]>;
}

export interface ProvenanceResponse {
  fragmentId: number;
  cells: Cell[];
  linkedFragments: number[];
}

export type SessionStateName =
  | "awaiting_selection"
  | "synthesizing"
  | "awaiting_validation"
  | "mismatch_decision";

export interface RegistryFragment {
  id: number;
  start: number;
  end: number;
  text: string;
}

export interface SessionPayload {
  state: SessionStateName;
  registry: RegistryFragment[];
  fragmentId?: number;
  expression?: string;
  target?: string;
  sPrime?: string;
  tentative?: WireDocument;
}

export interface Span {
  start: number;
  end: number;
}

export type AuthoringAction = "select" | "approve" | "reject" | "revise_goal";

export const cellKey = (c: Cell): string => `${c.dataset}${c.row}${c.field}`;
