/**
 * Application wiring: join a session with a participant token, enter
 * preferences, watch the round dashboard by polling, and view the result.
 *
 * Polling only reads; writes happen exclusively on user actions (submit,
 * and the SDM's compute-round / finalize buttons).
 */

import { ServiceError, SessionClient } from "./client.js";
import {
  renderDashboard,
  renderEvaluationStrip,
  renderPreferenceGrid,
  renderResult,
} from "./render.js";
import {
  buildDashboard,
  buildPreferenceGrid,
  buildResultView,
  gridComplete,
  gridPayload,
  setScore,
  setWeight,
} from "./viewmodel.js";
import type { PreferenceGridModel } from "./viewmodel.js";
import type { SessionDocument } from "./types.js";

const POLL_INTERVAL_MS = 3000;

interface AppState {
  client: SessionClient | null;
  dmId: string;
  session: SessionDocument | null;
  grid: PreferenceGridModel | null;
  pollTimer: number | null;
}

const state: AppState = {
  client: null,
  dmId: "",
  session: null,
  grid: null,
  pollTimer: null,
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function setStatus(text: string, isError = false): void {
  const node = byId("status");
  node.textContent = text;
  node.className = isError ? "status error" : "status";
}

async function join(): Promise<void> {
  const baseUrl = (byId("base-url") as HTMLInputElement).value.replace(/\/$/, "");
  const sessionId = (byId("session-id") as HTMLInputElement).value.trim();
  const dmId = (byId("dm-id") as HTMLInputElement).value.trim();
  const token = (byId("token") as HTMLInputElement).value.trim();
  state.client = new SessionClient(baseUrl, sessionId, token);
  state.dmId = dmId;
  try {
    state.session = await state.client.getSession();
  } catch (error) {
    state.client = null;
    if (error instanceof ServiceError && error.payload.code === "FORBIDDEN") {
      setStatus("token rejected; re-join with a valid participant token", true);
    } else {
      setStatus(`could not join: ${String(error)}`, true);
    }
    return;
  }
  setStatus(`joined session ${sessionId} as ${dmId}`);
  byId("join-panel").hidden = true;
  byId("workspace").hidden = false;
  refreshGrid();
  startPolling();
}

function refreshGrid(): void {
  if (!state.session) return;
  state.grid = buildPreferenceGrid(state.session, state.dmId);
  drawGrid();
}

function drawGrid(): void {
  if (!state.grid) return;
  renderPreferenceGrid(byId("grid"), state.grid, gridComplete(state.grid), {
    onWeight: (criterionId, value) => {
      setWeight(state.grid!, criterionId, value);
      drawGrid();
    },
    onScore: (criterionId, alternativeId, value) => {
      setScore(state.grid!, criterionId, alternativeId, value);
      drawGrid();
    },
    onSubmit: () => void submitPreferences(),
  });
}

async function submitPreferences(): Promise<void> {
  if (!state.client || !state.grid) return;
  try {
    const response = await state.client.submitPreferences(
      state.dmId,
      gridPayload(state.grid),
    );
    renderEvaluationStrip(byId("evaluation"), response.evaluation);
    setStatus("preferences submitted");
  } catch (error) {
    setStatus(`submit failed: ${String(error)}`, true);
  }
}

async function poll(): Promise<void> {
  if (!state.client) return;
  try {
    const [session, report, result] = await Promise.all([
      state.client.getSession(),
      state.client.latestRound(),
      state.client.result(),
    ]);
    state.session = session;
    if (report) {
      renderDashboard(byId("dashboard"), buildDashboard(report, session, state.dmId));
    }
    if (result) {
      renderResult(byId("result"), buildResultView(result, session));
      stopPolling();
    }
  } catch (error) {
    setStatus(`poll failed: ${String(error)}`, true);
  }
}

function startPolling(): void {
  void poll();
  state.pollTimer = window.setInterval(() => void poll(), POLL_INTERVAL_MS);
}

function stopPolling(): void {
  if (state.pollTimer !== null) {
    window.clearInterval(state.pollTimer);
    state.pollTimer = null;
  }
}

async function facilitatorAction(
  action: "round" | "finalize",
): Promise<void> {
  if (!state.client) return;
  try {
    if (action === "round") {
      await state.client.computeRound();
      setStatus("round computed");
    } else {
      await state.client.finalize();
      setStatus("session finalized");
    }
    await poll();
  } catch (error) {
    setStatus(`${action} failed: ${String(error)}`, true);
  }
}

export function initApp(): void {
  byId("join").addEventListener("click", () => void join());
  byId("compute-round").addEventListener("click", () => void facilitatorAction("round"));
  byId("finalize").addEventListener("click", () => void facilitatorAction("finalize"));
}

if (typeof document !== "undefined" && document.getElementById("join")) {
  initApp();
}
