import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";

/**
 * A tiny in-memory stand-in for the service, faithful to its protocol:
 * only the head-of-queue answer is accepted, everything else is a 409.
 */
class FakeService {
  status = "running";
  iteration = 0;
  queue = [
    {
      kind: "satisfaction",
      key: "0:satisfaction",
      payload: { classes: [["a"], ["b"]], ordered: true },
    },
  ];
  partition: { classes: string[][]; ordered: boolean; labels: null } = {
    classes: [["a"], ["b"]],
    ordered: true,
    labels: null,
  };
  answered: { key: string; answer: unknown }[] = [];

  fetch = async (url: string | URL | Request, init?: RequestInit) => {
    const path = String(url);
    if (path.endsWith("/pending")) {
      return json({ status: this.status, pending: this.queue });
    }
    if (path.endsWith("/partition")) {
      return json({
        status: this.status,
        iteration: this.iteration,
        partition: this.partition,
      });
    }
    if (path.endsWith("/answers")) {
      const body = JSON.parse(String(init?.body));
      if (this.queue.length === 0 || this.queue[0].key !== body.key) {
        return json({ error: "ProtocolViolation", detail: "stale" }, 409);
      }
      this.queue.shift();
      this.answered.push({ key: body.key, answer: body.answer });
      if (body.answer.satisfied === true) {
        this.status = "satisfied";
      }
      return json({
        status: this.status,
        iteration: this.iteration,
        pending: this.queue,
      });
    }
    return json({ detail: "not found" }, 404);
  };
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function controllerFor(service: FakeService): SessionController {
  const client = new ServiceClient("http://fake", service.fetch as typeof fetch);
  return new SessionController(client, "s1", 5);
}

describe("SessionController", () => {
  it("derives its view entirely from server responses", async () => {
    const service = new FakeService();
    const controller = controllerFor(service);
    const view = await controller.refresh();
    expect(view.status).toBe("running");
    expect(view.card?.kind).toBe("satisfaction");
    expect(view.partition?.classes).toEqual([["a"], ["b"]]);
  });

  it("answering satisfied moves the timeline to satisfied", async () => {
    const service = new FakeService();
    const controller = controllerFor(service);
    await controller.refresh();
    const view = await controller.submit("0:satisfaction", {
      satisfied: true,
    });
    expect(view.status).toBe("satisfied");
    expect(view.card).toBeNull();
    expect(view.timeline).toHaveLength(1);
    expect(view.timeline[0].status).toBe("satisfied");
  });

  it("every submitted answer appears verbatim server-side", async () => {
    const service = new FakeService();
    const controller = controllerFor(service);
    await controller.refresh();
    const answer = { satisfied: false, add_attribute: true };
    await controller.submit("0:satisfaction", answer);
    expect(service.answered).toEqual([
      { key: "0:satisfaction", answer },
    ]);
  });

  it("a stale card gets a 409 and reloads from the server", async () => {
    const service = new FakeService();
    const controller = controllerFor(service);
    await controller.refresh();
    // another tab answers first
    service.queue.shift();
    service.queue.push({
      kind: "propose_attribute",
      key: "0:propose_attribute",
      payload: {},
    });
    const view = await controller.submit("0:satisfaction", {
      satisfied: true,
    });
    expect(view.timeline).toHaveLength(0);
    expect(view.card?.kind).toBe("propose_attribute");
  });

  it("polling keeps refreshing until the session stops running", async () => {
    const service = new FakeService();
    const controller = controllerFor(service);
    controller.startPolling();
    await new Promise((resolve) => setTimeout(resolve, 25));
    expect(controller.current().card?.kind).toBe("satisfaction");
    service.status = "satisfied";
    service.queue = [];
    await new Promise((resolve) => setTimeout(resolve, 25));
    controller.stopPolling();
    expect(controller.current().status).toBe("satisfied");
  });
});
