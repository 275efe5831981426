/**
 * Wire types for the session service. These mirror the JSON the service
 * emits; the client never invents state of its own.
 */

export type SessionStatus = "running" | "satisfied" | "exhausted";

export type QueryKind =
  | "satisfaction"
  | "propose_attribute"
  | "propose_variable"
  | "pairwise";

export interface PendingQuery {
  kind: QueryKind | string;
  key: string;
  payload: Record<string, unknown>;
}

export interface PendingResponse {
  status: SessionStatus;
  pending: PendingQuery[];
}

export interface Partition {
  classes: string[][];
  ordered: boolean;
  labels: string[] | null;
}

export interface PartitionResponse {
  status: SessionStatus;
  iteration: number;
  partition: Partition | null;
}

export interface AnswerResponse {
  status: SessionStatus;
  iteration: number;
  pending: PendingQuery[];
}

export interface HistoryEntry {
  iteration: number;
  partition: string[][];
  answer: Record<string, unknown>;
}

export interface SessionSnapshot {
  id: string;
  status: SessionStatus;
  iteration: number;
  history: HistoryEntry[];
  pending: PendingQuery[];
  current_partition: Partition | null;
}

export interface AttributeSpec {
  name: string;
  scale?: string;
  codomain?: (string | number)[];
  evaluator?: string;
  higher_is_better?: boolean;
}

export interface VariableSpec {
  name: string;
  domain: ["enum", (string | number)[]] | ["binary"] | ["int", number, number];
}

export interface SatisfactionAnswer {
  satisfied: boolean;
  kept_classes?: number[];
  add_attribute?: boolean;
  add_variable?: boolean;
}

/** x is weakly/strictly preferred to y on the scoped attribute. */
export interface PreferenceAnswer {
  left: string;
  right: string;
  op: "weak" | "strict" | "indifferent";
  scope: string[];
  incomparable?: boolean;
}

export type Answer =
  | SatisfactionAnswer
  | PreferenceAnswer
  | AttributeSpec
  | VariableSpec;
