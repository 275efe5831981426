/**
 * Pending-query cards: the pure mapping between a service query and the
 * interactive card shown to the client, plus the reverse mapping from the
 * completed card back to the answer payload the protocol expects. Keeping
 * both directions here (DOM-free) is what makes the protocol testable.
 */

import type {
  Answer,
  AttributeSpec,
  PendingQuery,
  PreferenceAnswer,
  SatisfactionAnswer,
  VariableSpec,
} from "./types.js";

export type PairwiseChoice = "left" | "right" | "indifferent" | "incomparable";

export interface PairwiseCard {
  kind: "pairwise";
  key: string;
  left: string;
  right: string;
  attribute: string;
  choices: PairwiseChoice[];
}

export interface SatisfactionCard {
  kind: "satisfaction";
  key: string;
  classes: string[][];
  ordered: boolean;
  /** one keep-toggle per class, all on by default */
  kept: boolean[];
}

export interface ProposalCard {
  kind: "propose_attribute" | "propose_variable";
  key: string;
  scales: string[];
}

export interface DiagnosticCard {
  kind: "diagnostic";
  key: string;
  message: string;
}

export type Card =
  | PairwiseCard
  | SatisfactionCard
  | ProposalCard
  | DiagnosticCard;

const SCALES = ["nominal", "ordinal", "interval", "ratio"];

/** Build the interactive card for a pending query; unknown query types get
 * a diagnostic card that offers no submission at all. */
export function renderPending(query: PendingQuery): Card {
  switch (query.kind) {
    case "pairwise": {
      const p = query.payload as {
        left?: string;
        right?: string;
        attribute?: string;
      };
      if (typeof p.left !== "string" || typeof p.right !== "string") {
        return diagnostic(query, "pairwise query without two alternatives");
      }
      return {
        kind: "pairwise",
        key: query.key,
        left: p.left,
        right: p.right,
        attribute: typeof p.attribute === "string" ? p.attribute : "",
        choices: ["left", "right", "indifferent", "incomparable"],
      };
    }
    case "satisfaction": {
      const p = query.payload as { classes?: string[][]; ordered?: boolean };
      if (!Array.isArray(p.classes)) {
        return diagnostic(query, "satisfaction query without a partition");
      }
      return {
        kind: "satisfaction",
        key: query.key,
        classes: p.classes,
        ordered: p.ordered === true,
        kept: p.classes.map(() => true),
      };
    }
    case "propose_attribute":
    case "propose_variable":
      return { kind: query.kind, key: query.key, scales: SCALES };
    default:
      return diagnostic(query, `unknown query type "${query.kind}"`);
  }
}

function diagnostic(query: PendingQuery, message: string): DiagnosticCard {
  return { kind: "diagnostic", key: query.key, message };
}

/** Choosing "left" asserts left ⪰ right on the card's attribute. */
export function pairwiseAnswer(
  card: PairwiseCard,
  choice: PairwiseChoice,
): PreferenceAnswer {
  const scope = card.attribute ? [card.attribute] : [];
  switch (choice) {
    case "left":
      return { left: card.left, right: card.right, op: "weak", scope };
    case "right":
      return { left: card.right, right: card.left, op: "weak", scope };
    case "indifferent":
      return { left: card.left, right: card.right, op: "indifferent", scope };
    case "incomparable":
      return {
        left: card.left,
        right: card.right,
        op: "weak",
        scope,
        incomparable: true,
      };
  }
}

export interface SatisfactionInput {
  satisfied: boolean;
  addAttribute?: boolean;
  addVariable?: boolean;
}

export function satisfactionAnswer(
  card: SatisfactionCard,
  input: SatisfactionInput,
): SatisfactionAnswer {
  if (input.satisfied) {
    return { satisfied: true };
  }
  const kept = card.kept
    .map((keep, index) => (keep ? index : -1))
    .filter((index) => index >= 0);
  const answer: SatisfactionAnswer = { satisfied: false };
  if (kept.length < card.classes.length) {
    answer.kept_classes = kept;
  }
  if (input.addAttribute) {
    answer.add_attribute = true;
  }
  if (input.addVariable) {
    answer.add_variable = true;
  }
  return answer;
}

export interface AttributeFormState {
  name: string;
  scale: string;
  codomain: string;
  evaluator: string;
  higherIsBetter: boolean;
}

/** Parse the proposal form into a valid attribute payload; codomain is a
 * comma-separated list, numeric entries become numbers. */
export function attributeAnswer(form: AttributeFormState): AttributeSpec {
  if (!form.name.trim()) {
    throw new Error("attribute needs a name");
  }
  if (!SCALES.includes(form.scale)) {
    throw new Error(`unknown scale "${form.scale}"`);
  }
  const codomain = form.codomain
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => (Number.isNaN(Number(part)) ? part : Number(part)));
  return {
    name: form.name.trim(),
    scale: form.scale,
    codomain,
    evaluator: form.evaluator.trim() || undefined,
    higher_is_better: form.higherIsBetter,
  };
}

export interface VariableFormState {
  name: string;
  values: string;
}

export function variableAnswer(form: VariableFormState): VariableSpec {
  if (!form.name.trim()) {
    throw new Error("variable needs a name");
  }
  const values = form.values
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0)
    .map((part) => (Number.isNaN(Number(part)) ? part : Number(part)));
  if (values.length === 0) {
    throw new Error("variable needs at least one value");
  }
  return { name: form.name.trim(), domain: ["enum", values] };
}

export function cardAllowsSubmission(card: Card): boolean {
  return card.kind !== "diagnostic";
}

export type { Answer };
