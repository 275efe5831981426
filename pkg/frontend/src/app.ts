/**
 * Browser entry point: binds a SessionController to the DOM. The page
 * renders whatever the controller's view says, nothing more; every control
 * simply posts an answer and lets the next refresh redraw.
 */

import { ServiceClient } from "./api.js";
import {
  Card,
  PairwiseCard,
  SatisfactionCard,
  attributeAnswer,
  pairwiseAnswer,
  satisfactionAnswer,
  variableAnswer,
} from "./cards.js";
import { SessionController, SessionView } from "./controller.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  text?: string,
  className?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (text !== undefined) {
    node.textContent = text;
  }
  if (className !== undefined) {
    node.className = className;
  }
  return node;
}

function renderPartition(view: SessionView, root: HTMLElement): void {
  root.replaceChildren();
  if (view.partition === null) {
    root.append(el("p", "no partition yet"));
    return;
  }
  const row = el("div", undefined, "partition-row");
  view.partition.classes.forEach((cls, index) => {
    const column = el("div", undefined, "partition-class");
    const title = view.partition!.ordered
      ? `class ${index + 1}`
      : `group ${index + 1}`;
    column.append(el("h4", title));
    for (const member of cls) {
      column.append(el("div", member, "member"));
    }
    row.append(column);
  });
  root.append(row);
}

function renderTimeline(view: SessionView, root: HTMLElement): void {
  root.replaceChildren(el("h3", `status: ${view.status}`));
  for (const entry of view.timeline) {
    root.append(
      el("div", `${entry.key} -> ${JSON.stringify(entry.answer)}`, "entry"),
    );
  }
}

function renderCard(
  card: Card | null,
  controller: SessionController,
  root: HTMLElement,
): void {
  root.replaceChildren();
  if (card === null) {
    root.append(el("p", "nothing to answer"));
    return;
  }
  if (card.kind === "diagnostic") {
    root.append(el("p", card.message, "diagnostic"));
    return;
  }
  if (card.kind === "pairwise") {
    renderPairwise(card, controller, root);
    return;
  }
  if (card.kind === "satisfaction") {
    renderSatisfaction(card, controller, root);
    return;
  }
  renderProposal(card.kind, card.key, controller, root);
}

function renderPairwise(
  card: PairwiseCard,
  controller: SessionController,
  root: HTMLElement,
): void {
  root.append(el("h3", `which is better on ${card.attribute || "overall"}?`));
  const pair = el("div", undefined, "pair");
  pair.append(el("div", card.left, "option"), el("div", card.right, "option"));
  root.append(pair);
  for (const choice of card.choices) {
    const label =
      choice === "incomparable" ? "cannot compare" : choice;
    const button = el("button", label);
    button.addEventListener("click", () => {
      void controller.submit(card.key, pairwiseAnswer(card, choice));
    });
    root.append(button);
  }
}

function renderSatisfaction(
  card: SatisfactionCard,
  controller: SessionController,
  root: HTMLElement,
): void {
  root.append(el("h3", "are you satisfied with this partition?"));
  const summary = el("div", undefined, "partition-row");
  card.classes.forEach((cls, index) => {
    const column = el("div", undefined, "partition-class");
    column.append(el("h4", card.ordered ? `class ${index + 1}` : "group"));
    for (const member of cls) {
      column.append(el("div", member, "member"));
    }
    const keep = el("label", " keep");
    const toggle = el("input");
    toggle.type = "checkbox";
    toggle.checked = card.kept[index];
    toggle.addEventListener("change", () => {
      card.kept[index] = toggle.checked;
    });
    keep.prepend(toggle);
    column.append(keep);
    summary.append(column);
  });
  root.append(summary);

  const yes = el("button", "satisfied");
  yes.addEventListener("click", () => {
    void controller.submit(
      card.key,
      satisfactionAnswer(card, { satisfied: true }),
    );
  });
  const moreAttr = el("button", "not yet: add an attribute");
  moreAttr.addEventListener("click", () => {
    void controller.submit(
      card.key,
      satisfactionAnswer(card, { satisfied: false, addAttribute: true }),
    );
  });
  const moreVar = el("button", "not yet: add a variable");
  moreVar.addEventListener("click", () => {
    void controller.submit(
      card.key,
      satisfactionAnswer(card, { satisfied: false, addVariable: true }),
    );
  });
  root.append(yes, moreAttr, moreVar);
}

function renderProposal(
  kind: "propose_attribute" | "propose_variable",
  key: string,
  controller: SessionController,
  root: HTMLElement,
): void {
  const isAttribute = kind === "propose_attribute";
  root.append(
    el("h3", isAttribute ? "propose a new attribute" : "propose a variable"),
  );
  const name = el("input");
  name.placeholder = "name";
  const values = el("input");
  values.placeholder = isAttribute
    ? "codomain, comma separated"
    : "values, comma separated";
  root.append(name, values);

  let scale: HTMLSelectElement | null = null;
  let evaluator: HTMLInputElement | null = null;
  let better: HTMLInputElement | null = null;
  if (isAttribute) {
    scale = el("select");
    for (const option of ["nominal", "ordinal", "interval", "ratio"]) {
      const item = el("option", option);
      item.value = option;
      scale.append(item);
    }
    scale.value = "ordinal";
    evaluator = el("input");
    evaluator.placeholder = "evaluator expression";
    better = el("input");
    better.type = "checkbox";
    better.checked = true;
    const betterLabel = el("label", " higher is better");
    betterLabel.prepend(better);
    root.append(scale, evaluator, betterLabel);
  }

  const error = el("p", "", "error");
  const submit = el("button", "propose");
  submit.addEventListener("click", () => {
    try {
      const answer = isAttribute
        ? attributeAnswer({
            name: name.value,
            scale: scale!.value,
            codomain: values.value,
            evaluator: evaluator!.value,
            higherIsBetter: better!.checked,
          })
        : variableAnswer({ name: name.value, values: values.value });
      void controller.submit(key, answer);
    } catch (problem) {
      error.textContent = (problem as Error).message;
    }
  });
  root.append(submit, error);
}

export function mount(root: HTMLElement, baseUrl: string, sessionId: string) {
  const partitionPane = el("div", undefined, "partition-pane");
  const cardPane = el("div", undefined, "card-pane");
  const timelinePane = el("div", undefined, "timeline-pane");
  root.replaceChildren(partitionPane, cardPane, timelinePane);

  const controller = new SessionController(
    new ServiceClient(baseUrl),
    sessionId,
  );
  controller.onChange((view) => {
    renderPartition(view, partitionPane);
    renderCard(view.card, controller, cardPane);
    renderTimeline(view, timelinePane);
  });
  void controller.refresh();
  controller.startPolling();
  return controller;
}
