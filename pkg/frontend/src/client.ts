/**
 * Typed fetch client for the consensus service.
 *
 * Reads carry the participant bearer token; writes happen only through the
 * explicit submit/round/finalize calls (polling never mutates state).
 */

import type {
  AggregationResult,
  ApiError,
  CreatedSession,
  ProfileDocument,
  RoundReport,
  SessionDocument,
  SubmitResponse,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly payload: ApiError,
  ) {
    super(`${payload.code}: ${payload.message}`);
  }
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly sessionId: string,
    private readonly token: string,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: {
        "Content-Type": "application/json",
        Authorization: `Bearer ${this.token}`,
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, payload as ApiError);
    }
    return payload as T;
  }

  getSession(): Promise<SessionDocument> {
    return this.request("GET", `/sessions/${this.sessionId}`);
  }

  submitPreferences(
    dmId: string,
    profile: Omit<ProfileDocument, "dm_id">,
  ): Promise<SubmitResponse> {
    return this.request(
      "PUT",
      `/sessions/${this.sessionId}/participants/${dmId}/preferences`,
      profile,
    );
  }

  computeRound(): Promise<RoundReport> {
    return this.request("POST", `/sessions/${this.sessionId}/rounds`);
  }

  latestRound(): Promise<RoundReport | null> {
    return this.request<RoundReport>(
      "GET",
      `/sessions/${this.sessionId}/rounds/latest`,
    ).catch((error: unknown) => {
      if (error instanceof ServiceError && error.payload.code === "NOT_FOUND") {
        return null;
      }
      throw error;
    });
  }

  finalize(): Promise<AggregationResult> {
    return this.request("POST", `/sessions/${this.sessionId}/finalize`);
  }

  result(): Promise<AggregationResult | null> {
    return this.request<AggregationResult>(
      "GET",
      `/sessions/${this.sessionId}/result`,
    ).catch((error: unknown) => {
      if (error instanceof ServiceError && error.payload.code === "PREMATURE") {
        return null;
      }
      throw error;
    });
  }
}

/** Create a session (no token yet; returns the issued participant tokens). */
export async function createSession(
  baseUrl: string,
  body: unknown,
): Promise<CreatedSession> {
  const response = await fetch(`${baseUrl}/sessions`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const payload = await response.json();
  if (!response.ok) {
    throw new ServiceError(response.status, payload as ApiError);
  }
  return payload as CreatedSession;
}
