/** Handcrafted service payloads for view-model unit tests. */

import type {
  AggregationResult,
  RoundReport,
  SessionDocument,
} from "../src/types.js";

export const SESSION: SessionDocument = {
  version: 1,
  session_id: "fixture",
  config: {
    consensus_level: 0.9,
    max_distance: 0.1,
    social_mode: "worked",
    max_rounds: 10,
    epsilon: 1e-9,
  },
  scale: [
    ["very high", 1.0],
    ["high", 0.7],
    ["moderate", 0.5],
    ["low", 0.3],
  ],
  criteria: [
    { id: "c1", name: "Urgency", description: "" },
    { id: "c2", name: "Impact", description: "" },
  ],
  alternatives: [
    { id: "a1", name: "Plan A" },
    { id: "a2", name: "Plan B" },
    { id: "a3", name: "Plan C" },
  ],
  participants: [
    { id: "dm1", name: "DM1", role: "dm", reputation: 0.5 },
    { id: "dm2", name: "DM2", role: "dm", reputation: 0.6 },
    { id: "dm3", name: "DM3", role: "sdm", reputation: 0.9 },
  ],
  sdm_id: "dm3",
  round: 1,
  profiles: {
    dm1: {
      dm_id: "dm1",
      criterion_weights: { c1: 0.4, c2: 0.6 },
      scores: {
        c1: { a1: 1.0, a2: 0.7, a3: 0.3 },
        c2: { a1: 0.5, a2: 0.7, a3: 1.0 },
      },
    },
  },
  status: "assessed",
  history: [],
  result: null,
};

// Numbers here are deliberately arbitrary: the UI must copy them verbatim,
// so tests can detect any client-side recomputation.
export const REPORT: RoundReport = {
  round: 1,
  assessments: {
    dm1: {
      dm_id: "dm1",
      per_alternative: {
        a1: { distance: 0.05, excess: 0, in_consensus: true, weight: 1.0 },
        a2: { distance: 0.123, excess: 0.023, in_consensus: false, weight: 0.777 },
        a3: { distance: 0.04, excess: 0, in_consensus: true, weight: 1.0 },
      },
      consensus_count: 2,
      majority_reached: true,
    },
    dm2: {
      dm_id: "dm2",
      per_alternative: {
        a1: { distance: 0.31, excess: 0.21, in_consensus: false, weight: 0.81 },
        a2: { distance: 0.02, excess: 0, in_consensus: true, weight: 1.0 },
        a3: { distance: 0.4, excess: 0.3, in_consensus: false, weight: 0.74 },
      },
      consensus_count: 1,
      majority_reached: false,
    },
  },
  must_revise: ["dm2"],
  all_majority: false,
};

export const RESULT: AggregationResult = {
  contributions: {
    dm1: { a1: 0.6, a2: 0.5, a3: 0.4 },
    dm2: { a1: 0.3, a2: 0.6, a3: 0.2 },
    dm3: { a1: 0.7, a2: 0.8, a3: 0.5 },
  },
  totals: { a1: 1.6, a2: 1.9, a3: 1.1 },
  // Deliberately NOT the order a total-sort would give (a2 first): the view
  // must follow this array verbatim.
  ranking: ["a1", "a2", "a3"],
  forced: true,
};
