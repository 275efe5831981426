import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { execFile, spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

import { ServiceClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { SatisfactionCard, satisfactionAnswer } from "../src/cards.js";

const execFileAsync = promisify(execFile);

const PORT = 8765 + (process.pid % 1000);
const BASE = `http://127.0.0.1:${PORT}`;

const SEED = {
  name: "cost",
  scale: "ordinal",
  codomain: ["low", "mid", "high"],
  higher_is_better: false,
};

const PROPOSED_ATTRIBUTE = {
  name: "risk",
  scale: "ordinal",
  codomain: [0, 1],
  evaluator: "1",
  higher_is_better: false,
};

/** The same two-iteration elicitation replayed without the service. */
const HEADLESS_SCRIPT = `
import json
from decisionkit.engine import init_session, run_process
from decisionkit.formulation import Attribute, ProblemStatement
from decisionkit.oracle import TableOracle

seed = Attribute(name="cost", scale="ordinal",
                 codomain=("low", "mid", "high"), separable=True,
                 higher_is_better=False)
oracle = TableOracle({
    "0:satisfaction": {"satisfied": False, "add_attribute": True},
    "0:propose_attribute": {"name": "risk", "scale": "ordinal",
                            "codomain": [0, 1], "evaluator": "1",
                            "higher_is_better": False},
    "1:satisfaction": {"satisfied": True},
})
partition, session = run_process(
    init_session(seed, ProblemStatement(kind="ranking")), oracle)
print(json.dumps({"status": session.status,
                  "classes": [sorted(c) for c in partition.classes]}))
`;

let service: ChildProcess;
let store: string;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt++) {
    try {
      const response = await fetch(`${BASE}/sessions/nothing`);
      if (response.status === 404) {
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  store = mkdtempSync(join(tmpdir(), "dk-e2e-"));
  service = spawn(
    "python3",
    ["-m", "decisionkit.cli", "serve", "--port", String(PORT),
     "--store", store],
    { stdio: "ignore" },
  );
  await waitForService();
}, 30000);

afterAll(() => {
  service.kill();
  rmSync(store, { recursive: true, force: true });
});

describe("end-to-end elicitation", () => {
  it(
    "completes two iterations and matches the headless run",
    async () => {
      const client = new ServiceClient(BASE);
      await client.createSession({
        seed_attribute: SEED,
        statement: { kind: "ranking" },
        id: "e2e",
      });
      const controller = new SessionController(client, "e2e", 50);

      // iteration 0: the seeded partition is not good enough
      let view = await controller.refresh();
      expect(view.card?.kind).toBe("satisfaction");
      view = await controller.submit(
        view.card!.key,
        satisfactionAnswer(view.card as SatisfactionCard, {
          satisfied: false,
          addAttribute: true,
        }),
      );

      // the service now asks for the attribute
      expect(view.card?.kind).toBe("propose_attribute");
      view = await controller.submit(view.card!.key, PROPOSED_ATTRIBUTE);

      // iteration 1: accept the refined partition
      expect(view.card?.kind).toBe("satisfaction");
      expect(view.iteration).toBe(1);
      view = await controller.submit(view.card!.key, {
        satisfied: true,
      });
      expect(view.status).toBe("satisfied");
      expect(view.card).toBeNull();
      expect(view.timeline.map((entry) => entry.key)).toEqual([
        "0:satisfaction",
        "0:propose_attribute",
        "1:satisfaction",
      ]);

      const { stdout } = await execFileAsync("python3", [
        "-c",
        HEADLESS_SCRIPT,
      ]);
      const headless = JSON.parse(stdout);
      expect(headless.status).toBe("satisfied");
      const served = view.partition!.classes.map((cls) => [...cls].sort());
      expect(served).toEqual(headless.classes);
    },
    30000,
  );

  it("rejects an out-of-order answer with a conflict", async () => {
    const client = new ServiceClient(BASE);
    await client.createSession({ seed_attribute: SEED, id: "conflict" });
    await expect(
      client.submitAnswer("conflict", "9:satisfaction", { satisfied: true }),
    ).rejects.toThrow("protocol conflict");
  });
});
