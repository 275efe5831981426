import { describe, expect, it } from "vitest";

import {
  attributeAnswer,
  cardAllowsSubmission,
  pairwiseAnswer,
  renderPending,
  satisfactionAnswer,
  variableAnswer,
  PairwiseCard,
  SatisfactionCard,
} from "../src/cards.js";

describe("renderPending", () => {
  it("maps a pairwise query to a two-option card", () => {
    const card = renderPending({
      kind: "pairwise",
      key: "0:pairwise:x:y",
      payload: { left: "x", right: "y", attribute: "price" },
    }) as PairwiseCard;
    expect(card.kind).toBe("pairwise");
    expect(card.left).toBe("x");
    expect(card.right).toBe("y");
    expect(card.choices).toEqual([
      "left",
      "right",
      "indifferent",
      "incomparable",
    ]);
  });

  it("maps a satisfaction query to a summary with keep toggles", () => {
    const card = renderPending({
      kind: "satisfaction",
      key: "0:satisfaction",
      payload: { classes: [["a"], ["b"], ["c"]], ordered: true },
    }) as SatisfactionCard;
    expect(card.classes).toHaveLength(3);
    expect(card.kept).toEqual([true, true, true]);
    expect(card.ordered).toBe(true);
  });

  it("maps proposal queries to forms with a scale picker", () => {
    const card = renderPending({
      kind: "propose_attribute",
      key: "0:propose_attribute",
      payload: {},
    });
    expect(card.kind).toBe("propose_attribute");
    if (card.kind === "propose_attribute") {
      expect(card.scales).toContain("ordinal");
    }
  });

  it("gives unknown query types a diagnostic card with no submission", () => {
    const card = renderPending({
      kind: "telepathy",
      key: "0:telepathy",
      payload: {},
    });
    expect(card.kind).toBe("diagnostic");
    expect(cardAllowsSubmission(card)).toBe(false);
    if (card.kind === "diagnostic") {
      expect(card.message).toContain("telepathy");
    }
  });
});

describe("answer mapping", () => {
  const card = renderPending({
    kind: "pairwise",
    key: "k",
    payload: { left: "x", right: "y", attribute: "price" },
  }) as PairwiseCard;

  it("choosing left posts x weakly preferred to y on the attribute", () => {
    expect(pairwiseAnswer(card, "left")).toEqual({
      left: "x",
      right: "y",
      op: "weak",
      scope: ["price"],
    });
  });

  it("choosing right swaps the operands", () => {
    const answer = pairwiseAnswer(card, "right");
    expect(answer.left).toBe("y");
    expect(answer.right).toBe("x");
  });

  it("cannot-compare is flagged, not invented as a preference", () => {
    expect(pairwiseAnswer(card, "incomparable").incomparable).toBe(true);
  });

  it("satisfaction keeps only the toggled classes", () => {
    const summary = renderPending({
      kind: "satisfaction",
      key: "k",
      payload: { classes: [["a"], ["b"], ["c"]], ordered: true },
    }) as SatisfactionCard;
    summary.kept[2] = false;
    expect(
      satisfactionAnswer(summary, { satisfied: false, addAttribute: true }),
    ).toEqual({ satisfied: false, kept_classes: [0, 1], add_attribute: true });
    expect(satisfactionAnswer(summary, { satisfied: true })).toEqual({
      satisfied: true,
    });
  });

  it("the attribute form produces a valid attribute payload", () => {
    const spec = attributeAnswer({
      name: " risk ",
      scale: "ordinal",
      codomain: "0, 1, high",
      evaluator: "premium >= 1",
      higherIsBetter: false,
    });
    expect(spec).toEqual({
      name: "risk",
      scale: "ordinal",
      codomain: [0, 1, "high"],
      evaluator: "premium >= 1",
      higher_is_better: false,
    });
    expect(() =>
      attributeAnswer({
        name: "",
        scale: "ordinal",
        codomain: "",
        evaluator: "",
        higherIsBetter: true,
      }),
    ).toThrow("name");
  });

  it("the variable form produces an enumerated domain", () => {
    expect(variableAnswer({ name: "premium", values: "0,1" })).toEqual({
      name: "premium",
      domain: ["enum", [0, 1]],
    });
    expect(() => variableAnswer({ name: "p", values: " " })).toThrow("value");
  });
});
