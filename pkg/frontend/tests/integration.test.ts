/**
 * End-to-end conformance against a live service running the bundled demo
 * fixture: DM2's round-1 dashboard shows one consonant badge out of five,
 * the final ranking lists a2 first with total 2.7, and score cells offer
 * exactly the four scale values.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { createSession, SessionClient } from "../src/client.js";
import {
  buildDashboard,
  buildPreferenceGrid,
  buildResultView,
} from "../src/viewmodel.js";
import type { CreatedSession } from "../src/types.js";

const PYTHON = process.env.PYTHON ?? "python3";

const DEMO_PROFILES: Record<
  string,
  { criterion_weights: Record<string, number>; scores: Record<string, Record<string, number>> }
> = {
  dm1: {
    criterion_weights: { c1: 0.7, c2: 0.1, c3: 0.1 },
    scores: {
      c1: { a1: 1, a2: 1, a3: 1, a4: 0.3, a5: 0.5 },
      c2: { a1: 1, a2: 1, a3: 1, a4: 0.3, a5: 0.5 },
      c3: { a1: 1, a2: 1, a3: 1, a4: 1, a5: 1 },
    },
  },
  dm2: {
    criterion_weights: { c1: 0.4, c2: 0.1, c3: 0.2 },
    scores: {
      c1: { a1: 1, a2: 0.5, a3: 0.5, a4: 0.5, a5: 0.3 },
      c2: { a1: 0.5, a2: 0.5, a3: 0.5, a4: 0.5, a5: 0.3 },
      c3: { a1: 0.3, a2: 0.3, a3: 0.3, a4: 1, a5: 0.5 },
    },
  },
  dm3: {
    criterion_weights: { c1: 0.3, c2: 0.5, c3: 0.2 },
    scores: {
      c1: { a1: 0.5, a2: 1, a3: 1, a4: 0.3, a5: 0.5 },
      c2: { a1: 1, a2: 1, a3: 0.5, a4: 0.3, a5: 0.5 },
      c3: { a1: 0.5, a2: 0.5, a3: 0.5, a4: 1, a5: 1 },
    },
  },
};

const DM2_REVISION = {
  criterion_weights: { c1: 0.4, c2: 0.4, c3: 0.2 },
  scores: {
    c1: { a1: 1, a2: 1, a3: 1, a4: 0.5, a5: 0.5 },
    c2: { a1: 0.5, a2: 1, a3: 0.5, a4: 0.5, a5: 1 },
    c3: { a1: 0.3, a2: 0.5, a3: 0.3, a4: 1, a5: 1 },
  },
};

function fixtureBody() {
  return {
    config: { consensus_level: 0.9 },
    criteria: [
      { id: "c1", name: "Urgency" },
      { id: "c2", name: "Community impact" },
      { id: "c3", name: "Work plan quality" },
    ],
    alternatives: [1, 2, 3, 4, 5].map((i) => ({ id: `a${i}`, name: `Project ${i}` })),
    participants: [
      { id: "dm1", name: "DM1", reputation: 0.6 },
      { id: "dm2", name: "DM2", reputation: 0.7 },
      { id: "dm3", name: "DM3", reputation: 0.9 },
    ],
  };
}

async function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      server.close(() => resolve(address.port));
    });
    server.on("error", reject);
  });
}

async function waitForHealth(baseUrl: string, child: ChildProcess): Promise<void> {
  const deadline = Date.now() + 30_000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early with code ${child.exitCode}`);
    }
    try {
      const response = await fetch(`${baseUrl}/health`);
      if (response.ok) return;
    } catch (error) {
      lastError = error;
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service never became healthy: ${String(lastError)}`);
}

describe("live service conformance", () => {
  let child: ChildProcess;
  let baseUrl: string;
  let created: CreatedSession;
  let tokens: Record<string, string>;

  beforeAll(async () => {
    const port = await freePort();
    baseUrl = `http://127.0.0.1:${port}`;
    const store = mkdtempSync(join(tmpdir(), "consensus-store-"));
    child = spawn(
      PYTHON,
      ["-m", "sdm_consensus.service", "--store", store, "--port", String(port)],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    await waitForHealth(baseUrl, child);

    created = await createSession(baseUrl, fixtureBody());
    tokens = Object.fromEntries(created.participants.map((p) => [p.id, p.token]));
  }, 45_000);

  afterAll(() => {
    child?.kill("SIGTERM");
  });

  function clientFor(dmId: string): SessionClient {
    return new SessionClient(baseUrl, created.session_id, tokens[dmId]!);
  }

  it("elects dm3 as the SDM", () => {
    expect(created.sdm_id).toBe("dm3");
  });

  it("offers exactly the four scale values in every score cell", async () => {
    const session = await clientFor("dm1").getSession();
    const grid = buildPreferenceGrid(session, "dm1");
    expect(grid.cells).toHaveLength(15);
    for (const cell of grid.cells) {
      expect(cell.options.map(([, value]) => value)).toEqual([1.0, 0.7, 0.5, 0.3]);
    }
  });

  it("shows dm2 one consonant badge out of five after round one", async () => {
    for (const [dmId, profile] of Object.entries(DEMO_PROFILES)) {
      const response = await clientFor(dmId).submitPreferences(dmId, profile);
      expect(response.dm_id).toBe(dmId);
    }
    const sdm = clientFor("dm3");
    const report = await sdm.computeRound();
    const session = await sdm.getSession();

    const dashboard = buildDashboard(report, session, "dm2");
    expect(dashboard.revisionRequired).toBe(true);
    const badges = dashboard.members[0]!.badges;
    expect(badges).toHaveLength(5);
    expect(badges.filter((b) => b.inConsensus)).toHaveLength(1);
    expect(badges.filter((b) => !b.inConsensus)).toHaveLength(4);
    expect(badges.find((b) => b.inConsensus)?.alternativeId).toBe("a4");
  });

  it("lists a2 first with total 2.7 in the final ranking view", async () => {
    await clientFor("dm2").submitPreferences("dm2", DM2_REVISION);
    const sdm = clientFor("dm3");
    const report = await sdm.computeRound();
    expect(report.all_majority).toBe(true);

    const result = await sdm.finalize();
    const session = await sdm.getSession();
    const view = buildResultView(result, session);

    expect(view.rows[0]?.alternativeId).toBe("a2");
    expect(view.rows[0]?.total).toBeCloseTo(2.7, 3);
    expect(Math.abs(view.rows[0]!.total - 2.7)).toBeLessThanOrEqual(1e-3);
    expect(view.rows.map((r) => r.alternativeId)).toEqual([
      "a2",
      "a1",
      "a3",
      "a5",
      "a4",
    ]);
    expect(view.forced).toBe(false);
  });

  it("keeps polling reads idempotent", async () => {
    const viewer = clientFor("dm1");
    const first = await viewer.latestRound();
    const second = await viewer.latestRound();
    expect(first).toEqual(second);
    const result1 = await viewer.result();
    const result2 = await viewer.result();
    expect(result1).toEqual(result2);
  });
});
