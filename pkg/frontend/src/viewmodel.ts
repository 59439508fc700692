/**
 * Pure view-model builders.
 *
 * Every number displayed by the UI is copied verbatim from a service payload;
 * nothing here recomputes evaluations, distances, weights, or totals. The
 * functions are DOM-free so they can be tested directly against live or
 * recorded payloads.
 */

import type {
  AggregationResult,
  RoundReport,
  ScaleLevel,
  SessionDocument,
} from "./types.js";

/** Display rounding used in tables; tooltips keep full precision. */
export function fmt3(value: number): string {
  return value.toFixed(3);
}

export function clampWeight(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

// ---------------------------------------------------------------------------
// Preference grid
// ---------------------------------------------------------------------------

export interface ScoreCell {
  criterionId: string;
  alternativeId: string;
  /** Allowed options, exactly the session's scale. */
  options: ScaleLevel[];
  /** Selected scale value, null until the user picks one. */
  value: number | null;
}

export interface WeightRow {
  criterionId: string;
  name: string;
  description: string;
  /** Weight in [0, 1], null until set. */
  value: number | null;
}

export interface PreferenceGridModel {
  dmId: string;
  weights: WeightRow[];
  cells: ScoreCell[];
  alternatives: { id: string; name: string }[];
}

export function buildPreferenceGrid(
  session: SessionDocument,
  dmId: string,
): PreferenceGridModel {
  const existing = session.profiles[dmId];
  const weights: WeightRow[] = session.criteria.map((criterion) => ({
    criterionId: criterion.id,
    name: criterion.name || criterion.id,
    description: criterion.description,
    value: existing ? (existing.criterion_weights[criterion.id] ?? null) : null,
  }));
  const cells: ScoreCell[] = [];
  for (const criterion of session.criteria) {
    for (const alternative of session.alternatives) {
      cells.push({
        criterionId: criterion.id,
        alternativeId: alternative.id,
        options: session.scale.map((level) => [...level] as ScaleLevel),
        value: existing ? (existing.scores[criterion.id]?.[alternative.id] ?? null) : null,
      });
    }
  }
  return {
    dmId,
    weights,
    cells,
    alternatives: session.alternatives.map((a) => ({ id: a.id, name: a.name || a.id })),
  };
}

/** Submit stays disabled until every weight and score cell is set. */
export function gridComplete(grid: PreferenceGridModel): boolean {
  return (
    grid.weights.every((row) => row.value !== null) &&
    grid.cells.every((cell) => cell.value !== null)
  );
}

export function setWeight(
  grid: PreferenceGridModel,
  criterionId: string,
  value: number,
): void {
  const row = grid.weights.find((r) => r.criterionId === criterionId);
  if (!row) throw new Error(`unknown criterion ${criterionId}`);
  row.value = clampWeight(value);
}

export function setScore(
  grid: PreferenceGridModel,
  criterionId: string,
  alternativeId: string,
  value: number,
): void {
  const cell = grid.cells.find(
    (c) => c.criterionId === criterionId && c.alternativeId === alternativeId,
  );
  if (!cell) throw new Error(`unknown cell ${criterionId}/${alternativeId}`);
  if (!cell.options.some(([, allowed]) => allowed === value)) {
    throw new Error(`score ${value} is not on the session scale`);
  }
  cell.value = value;
}

export function gridPayload(grid: PreferenceGridModel): {
  criterion_weights: Record<string, number>;
  scores: Record<string, Record<string, number>>;
} {
  if (!gridComplete(grid)) {
    throw new Error("grid is incomplete");
  }
  const criterion_weights: Record<string, number> = {};
  for (const row of grid.weights) {
    criterion_weights[row.criterionId] = row.value as number;
  }
  const scores: Record<string, Record<string, number>> = {};
  for (const cell of grid.cells) {
    (scores[cell.criterionId] ??= {})[cell.alternativeId] = cell.value as number;
  }
  return { criterion_weights, scores };
}

// ---------------------------------------------------------------------------
// Round dashboard
// ---------------------------------------------------------------------------

export interface ConsensusBadge {
  alternativeId: string;
  alternativeName: string;
  /** Values verbatim from the round report. */
  distance: number;
  excess: number;
  inConsensus: boolean;
  weight: number;
  /** Distance as a fraction of the bar span (2x threshold), for rendering. */
  barFraction: number;
  /** Threshold position on the same span. */
  thresholdFraction: number;
}

export interface MemberDashboard {
  dmId: string;
  /** Anonymized for non-SDM viewers looking at peers. */
  label: string;
  badges: ConsensusBadge[];
  consensusCount: number;
  majorityReached: boolean;
  mustRevise: boolean;
  isViewer: boolean;
}

export interface PeerStatus {
  label: string;
  majorityReached: boolean;
}

export interface DashboardModel {
  round: number;
  maxDistance: number;
  allMajority: boolean;
  /** Dashboards the viewer may see in full (own for DMs, all for the SDM). */
  members: MemberDashboard[];
  /** Majority state of the remaining participants, anonymized. */
  peers: PeerStatus[];
  /** True when the viewer is flagged for revision this round. */
  revisionRequired: boolean;
}

function badgesFor(
  report: RoundReport,
  session: SessionDocument,
  dmId: string,
): ConsensusBadge[] {
  const assessment = report.assessments[dmId];
  if (!assessment) return [];
  const maxDistance = session.config.max_distance;
  const span = maxDistance > 0 ? 2 * maxDistance : 1;
  return session.alternatives.map((alternative) => {
    const cell = assessment.per_alternative[alternative.id];
    if (!cell) {
      throw new Error(`report is missing alternative ${alternative.id}`);
    }
    return {
      alternativeId: alternative.id,
      alternativeName: alternative.name || alternative.id,
      distance: cell.distance,
      excess: cell.excess,
      inConsensus: cell.in_consensus,
      weight: cell.weight,
      barFraction: Math.min(1, cell.distance / span),
      thresholdFraction: Math.min(1, maxDistance / span),
    };
  });
}

export function buildDashboard(
  report: RoundReport,
  session: SessionDocument,
  viewerId: string,
): DashboardModel {
  const isSdm = viewerId === session.sdm_id;
  const assessedIds = session.participants
    .map((p) => p.id)
    .filter((id) => id in report.assessments);

  const visibleIds = isSdm ? assessedIds : assessedIds.filter((id) => id === viewerId);
  const members: MemberDashboard[] = visibleIds.map((dmId) => {
    const assessment = report.assessments[dmId]!;
    return {
      dmId,
      label: session.participants.find((p) => p.id === dmId)?.name || dmId,
      badges: badgesFor(report, session, dmId),
      consensusCount: assessment.consensus_count,
      majorityReached: assessment.majority_reached,
      mustRevise: report.must_revise.includes(dmId),
      isViewer: dmId === viewerId,
    };
  });

  // Remaining participants appear only as anonymized majority states.
  const peers: PeerStatus[] = assessedIds
    .filter((id) => !visibleIds.includes(id))
    .map((id, index) => ({
      label: `participant ${index + 1}`,
      majorityReached: report.assessments[id]!.majority_reached,
    }));

  return {
    round: report.round,
    maxDistance: session.config.max_distance,
    allMajority: report.all_majority,
    members,
    peers,
    revisionRequired: report.must_revise.includes(viewerId),
  };
}

// ---------------------------------------------------------------------------
// Result view
// ---------------------------------------------------------------------------

export interface ResultRow {
  rank: number;
  alternativeId: string;
  alternativeName: string;
  total: number;
  /** Per-participant contribution, in participant order. */
  contributions: { dmId: string; value: number }[];
}

export interface ResultViewModel {
  rows: ResultRow[];
  participantIds: string[];
  forced: boolean;
}

export function buildResultView(
  result: AggregationResult,
  session: SessionDocument,
): ResultViewModel {
  const participantIds = session.participants.map((p) => p.id);
  const names = new Map(session.alternatives.map((a) => [a.id, a.name || a.id]));
  // Row order follows the service ranking verbatim; no client-side sorting.
  const rows = result.ranking.map((alternativeId, index) => {
    const total = result.totals[alternativeId];
    if (total === undefined) {
      throw new Error(`result is missing a total for ${alternativeId}`);
    }
    return {
      rank: index + 1,
      alternativeId,
      alternativeName: names.get(alternativeId) ?? alternativeId,
      total,
      contributions: participantIds.map((dmId) => ({
        dmId,
        value: result.contributions[dmId]?.[alternativeId] ?? 0,
      })),
    };
  });
  return { rows, participantIds, forced: result.forced };
}
