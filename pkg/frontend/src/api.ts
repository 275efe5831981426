/**
 * Thin REST client for the session service. All state lives server-side;
 * this module only moves JSON and surfaces protocol conflicts (409) as a
 * typed error the controller can react to.
 */

import type {
  Answer,
  AnswerResponse,
  AttributeSpec,
  PartitionResponse,
  PendingResponse,
  SessionSnapshot,
} from "./types.js";

export class ProtocolConflictError extends Error {
  constructor(public detail: string) {
    super(`protocol conflict: ${detail}`);
    this.name = "ProtocolConflictError";
  }
}

export class ServiceError extends Error {
  constructor(public status: number, detail: string) {
    super(`service error ${status}: ${detail}`);
    this.name = "ServiceError";
  }
}

export interface CreateSessionRequest {
  seed_attribute: AttributeSpec;
  statement?: { kind: string; class_count?: number };
  id?: string;
  max_iter?: number;
}

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (response.status === 409) {
      const data = await response.json().catch(() => ({}));
      throw new ProtocolConflictError(
        (data as { detail?: string }).detail ?? "conflicting request",
      );
    }
    if (!response.ok) {
      const text = await response.text().catch(() => "");
      throw new ServiceError(response.status, text);
    }
    return (await response.json()) as T;
  }

  createSession(req: CreateSessionRequest) {
    return this.request<{ id: string; status: string }>(
      "POST",
      "/sessions",
      req,
    );
  }

  getSession(id: string) {
    return this.request<SessionSnapshot>("GET", `/sessions/${id}`);
  }

  getPending(id: string) {
    return this.request<PendingResponse>("GET", `/sessions/${id}/pending`);
  }

  getPartition(id: string) {
    return this.request<PartitionResponse>("GET", `/sessions/${id}/partition`);
  }

  /** Post the answer for one query key; token makes retries idempotent. */
  submitAnswer(id: string, key: string, answer: Answer, token?: string) {
    return this.request<AnswerResponse>("POST", `/sessions/${id}/answers`, {
      key,
      answer,
      ...(token === undefined ? {} : { token }),
    });
  }
}
