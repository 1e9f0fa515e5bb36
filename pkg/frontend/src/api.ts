import type {
  ModelRegistration,
  ObjectiveKey,
  Polarity,
  RunResults,
  SessionView,
} from "./types.js";

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  const body = await res.json().catch(() => null);
  if (!res.ok) {
    const code = body && typeof body.code === "string" ? body.code : "http_error";
    const message =
      body && typeof body.message === "string" ? body.message : `HTTP ${res.status}`;
    throw new ServiceError(res.status, code, message);
  }
  return body as T;
}

function post(payload: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  };
}

/** Typed client for the what-if service; one instance per base URL. */
export class Api {
  constructor(private readonly base: string = "") {}

  registerModel(text: string): Promise<ModelRegistration> {
    return request(`${this.base}/models`, post({ text }));
  }

  createSession(modelId: string, seed: number): Promise<SessionView> {
    return request(`${this.base}/sessions`, post({ model_id: modelId, seed }));
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(`${this.base}/sessions/${sessionId}`);
  }

  pin(sessionId: string, node: string, polarity: Polarity): Promise<SessionView> {
    return request(
      `${this.base}/sessions/${sessionId}/pins`,
      post({ decision: node, polarity }),
    );
  }

  unpin(sessionId: string, node: string): Promise<SessionView> {
    return request(`${this.base}/sessions/${sessionId}/pins/${node}`, {
      method: "DELETE",
    });
  }

  setObjectives(sessionId: string, enabled: ObjectiveKey[]): Promise<SessionView> {
    return request(`${this.base}/sessions/${sessionId}/objectives`, post({ enabled }));
  }

  run(sessionId: string): Promise<RunResults> {
    return request(`${this.base}/sessions/${sessionId}/run`, { method: "POST" });
  }
}
