/**
 * Session state management: a polling loop that mirrors server state and a
 * submit path that always re-fetches after acknowledgment. There is no
 * optimistic update anywhere; the view is a pure function of the last
 * server responses, and a 409 simply reloads the current card.
 */

import { ProtocolConflictError, ServiceClient } from "./api.js";
import { Card, renderPending } from "./cards.js";
import type {
  Answer,
  Partition,
  PendingQuery,
  SessionStatus,
} from "./types.js";

export interface SessionView {
  sessionId: string;
  status: SessionStatus;
  iteration: number;
  partition: Partition | null;
  card: Card | null;
  timeline: TimelineEntry[];
}

export interface TimelineEntry {
  key: string;
  answer: Answer;
  status: SessionStatus;
}

export type ViewListener = (view: SessionView) => void;

export const DEFAULT_POLL_INTERVAL_MS = 1000;

export class SessionController {
  private view: SessionView;
  private listeners: ViewListener[] = [];
  private timer: ReturnType<typeof setTimeout> | null = null;
  private tokenCounter = 0;

  constructor(
    private client: ServiceClient,
    private sessionId: string,
    private pollIntervalMs: number = DEFAULT_POLL_INTERVAL_MS,
  ) {
    this.view = {
      sessionId,
      status: "running",
      iteration: 0,
      partition: null,
      card: null,
      timeline: [],
    };
  }

  onChange(listener: ViewListener): void {
    this.listeners.push(listener);
  }

  current(): SessionView {
    return this.view;
  }

  /** Pull pending query and partition; the single source of view state. */
  async refresh(): Promise<SessionView> {
    const [pending, partition] = await Promise.all([
      this.client.getPending(this.sessionId),
      this.client.getPartition(this.sessionId),
    ]);
    const head: PendingQuery | undefined = pending.pending[0];
    this.view = {
      ...this.view,
      status: pending.status,
      iteration: partition.iteration,
      partition: partition.partition,
      card: head === undefined ? null : renderPending(head),
    };
    this.emit();
    return this.view;
  }

  /**
   * Submit the answer for the card currently shown. A protocol conflict
   * (another tab answered first, or the card went stale) reloads the card
   * from the server instead of surfacing an error.
   */
  async submit(key: string, answer: Answer): Promise<SessionView> {
    const token = `${this.sessionId}:${key}:${this.tokenCounter++}`;
    try {
      const ack = await this.client.submitAnswer(
        this.sessionId,
        key,
        answer,
        token,
      );
      this.view.timeline.push({ key, answer, status: ack.status });
    } catch (error) {
      if (error instanceof ProtocolConflictError) {
        return this.refresh();
      }
      throw error;
    }
    return this.refresh();
  }

  startPolling(): void {
    if (this.timer !== null) {
      return;
    }
    const tick = async () => {
      try {
        await this.refresh();
      } finally {
        if (this.timer !== null && this.view.status === "running") {
          this.timer = setTimeout(tick, this.pollIntervalMs);
        }
      }
    };
    this.timer = setTimeout(tick, this.pollIntervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private emit(): void {
    for (const listener of this.listeners) {
      listener(this.view);
    }
  }
}
