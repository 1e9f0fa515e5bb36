import type { ModelRegistration, SessionView } from "./types.js";

// UI state is a pure projection of the last service response plus what is
// currently in flight; a page refresh rebuilds it from GET /sessions/{id}.

export interface State {
  registration: ModelRegistration | null;
  view: SessionView | null;
  running: boolean;
  error: string | null;
}

export const initialState: State = {
  registration: null,
  view: null,
  running: false,
  error: null,
};

export type Action =
  | { kind: "model_registered"; registration: ModelRegistration }
  | { kind: "view_updated"; view: SessionView }
  | { kind: "run_started" }
  | { kind: "run_finished"; view: SessionView }
  | { kind: "request_failed"; message: string }
  | { kind: "reset" };

export function reduce(state: State, action: Action): State {
  switch (action.kind) {
    case "model_registered":
      // a new model invalidates any open session
      return {
        ...initialState,
        registration: action.registration,
      };
    case "view_updated":
      return { ...state, view: action.view, error: null };
    case "run_started":
      return { ...state, running: true, error: null };
    case "run_finished":
      return { ...state, view: action.view, running: false, error: null };
    case "request_failed":
      return { ...state, running: false, error: action.message };
    case "reset":
      return initialState;
  }
}

/** The run button is usable only with a valid session and no run in flight. */
export function canRun(state: State): boolean {
  return state.view !== null && !state.running;
}

/** Results exist but no longer match the session's pins/objectives. */
export function showStaleBanner(state: State): boolean {
  return state.view !== null && state.view.has_results && state.view.stale;
}
