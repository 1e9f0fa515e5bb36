import { Api, ServiceError } from "./api.js";
import { chartHtml } from "./chart.js";
import { badgeHtml, orderingHtml, pinnedHtml } from "./list.js";
import { canRun, initialState, reduce, showStaleBanner, type Action, type State } from "./state.js";
import { OBJECTIVE_KEYS, OBJECTIVE_LABELS, type ObjectiveKey, type Polarity } from "./types.js";

const api = new Api("");
let state: State = initialState;

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function dispatch(action: Action): void {
  state = reduce(state, action);
  render();
}

async function call<T>(work: Promise<T>, onOk: (value: T) => Action): Promise<void> {
  try {
    dispatch(onOk(await work));
  } catch (err) {
    const message =
      err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
    dispatch({ kind: "request_failed", message });
  }
}

function render(): void {
  const { registration, view, running, error } = state;

  $("error").textContent = error ?? "";
  $("error").hidden = !error;

  const validation = $("validation");
  if (!registration) {
    validation.textContent = "";
  } else if (registration.validation.valid) {
    validation.innerHTML = `<p class="ok">model <code>${registration.model_id}</code> is valid</p>`;
  } else {
    const items = registration.validation.violations
      .map((v) => `<li>[${v.rule}] ${v.subject}: ${v.message}</li>`)
      .join("");
    validation.innerHTML = `<p class="bad">model failed validation</p><ul>${items}</ul>`;
  }
  ($("open-session") as HTMLButtonElement).disabled =
    !registration || !registration.validation.valid;

  $("session").hidden = view === null;
  const runBtn = $("run") as HTMLButtonElement;
  runBtn.disabled = !canRun(state);
  runBtn.textContent = running ? "running..." : "run";
  $("stale-banner").hidden = !showStaleBanner(state);

  if (!view) return;
  $("session-label").textContent = `${view.session_id} (seed ${view.seed})`;
  $("pinned").innerHTML = pinnedHtml(view);

  for (const key of OBJECTIVE_KEYS) {
    const box = $(`obj-${key}`) as HTMLInputElement;
    box.checked = view.objectives.includes(key);
    box.disabled = running;
  }

  if (view.results) {
    $("badge").innerHTML = badgeHtml(
      view.results.report,
      view.results.ordering.entries.length + view.pinned.length,
    );
    $("ordering").innerHTML = orderingHtml(view.results);
    $("chart").innerHTML = chartHtml(view.results.curve);
  } else {
    $("badge").innerHTML = "";
    $("ordering").innerHTML = `<p class="empty">not run yet</p>`;
    $("chart").innerHTML = "";
  }
}

function sessionId(): string {
  if (!state.view) throw new Error("no open session");
  return state.view.session_id;
}

export function wire(): void {
  $("register").addEventListener("click", () => {
    const text = ($("model-text") as HTMLTextAreaElement).value;
    void call(api.registerModel(text), (registration) => ({
      kind: "model_registered",
      registration,
    }));
  });

  const fileInput = $("model-file") as HTMLInputElement;
  fileInput.addEventListener("change", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    ($("model-text") as HTMLTextAreaElement).value = await file.text();
  });

  $("open-session").addEventListener("click", () => {
    const reg = state.registration;
    if (!reg) return;
    const seed = Number(($("seed") as HTMLInputElement).value) || 0;
    void call(api.createSession(reg.model_id, seed), (view) => ({
      kind: "view_updated",
      view,
    }));
  });

  $("run").addEventListener("click", async () => {
    const id = sessionId();
    dispatch({ kind: "run_started" });
    try {
      await api.run(id);
      // re-read the canonical session view rather than patching locally
      dispatch({ kind: "run_finished", view: await api.getSession(id) });
    } catch (err) {
      const message =
        err instanceof ServiceError ? `${err.code}: ${err.message}` : String(err);
      dispatch({ kind: "request_failed", message });
    }
  });

  for (const key of OBJECTIVE_KEYS) {
    $(`obj-${key}`).addEventListener("change", () => {
      const enabled = OBJECTIVE_KEYS.filter(
        (k) => ($(`obj-${k}`) as HTMLInputElement).checked,
      );
      if (!enabled.length) {
        render(); // refuse locally; the service would 400 anyway
        return;
      }
      void call(api.setObjectives(sessionId(), enabled), (view) => ({
        kind: "view_updated",
        view,
      }));
    });
  }

  document.body.addEventListener("click", (ev) => {
    const btn = (ev.target as HTMLElement).closest("button[data-action]");
    if (!(btn instanceof HTMLButtonElement)) return;
    const node = btn.dataset.node as string;
    if (btn.dataset.action === "pin") {
      void call(
        api.pin(sessionId(), node, btn.dataset.polarity as Polarity),
        (view) => ({ kind: "view_updated", view }),
      );
    } else if (btn.dataset.action === "unpin") {
      void call(api.unpin(sessionId(), node), (view) => ({ kind: "view_updated", view }));
    }
  });

  const toggles = $("objectives");
  toggles.querySelectorAll("label").forEach((label) => {
    const key = label.dataset.key as ObjectiveKey | undefined;
    if (key) label.append(` ${key} (${OBJECTIVE_LABELS[key]})`);
  });

  render();
}

if (typeof document !== "undefined" && document.getElementById("register")) {
  wire();
}
