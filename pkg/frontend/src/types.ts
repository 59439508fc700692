/**
 * Wire types for the consensus service payloads.
 *
 * These mirror the service JSON exactly; the client renders the numbers it
 * receives and never recomputes the model math locally.
 */

export interface SessionConfig {
  consensus_level: number;
  max_distance: number;
  social_mode: string;
  max_rounds: number;
  epsilon: number;
}

export interface Criterion {
  id: string;
  name: string;
  description: string;
}

export interface Alternative {
  id: string;
  name: string;
}

export interface Participant {
  id: string;
  name: string;
  role: "sdm" | "dm";
  reputation: number;
}

export type ScaleLevel = [label: string, value: number];

export interface ProfileDocument {
  dm_id: string;
  criterion_weights: Record<string, number>;
  scores: Record<string, Record<string, number>>;
}

export interface SessionDocument {
  version: number;
  session_id: string;
  config: SessionConfig;
  scale: ScaleLevel[];
  criteria: Criterion[];
  alternatives: Alternative[];
  participants: Participant[];
  sdm_id: string;
  round: number;
  profiles: Record<string, ProfileDocument>;
  status: "collecting" | "assessed" | "finalized";
  history: RoundReport[];
  result: AggregationResult | null;
}

export interface AlternativeAssessment {
  distance: number;
  excess: number;
  in_consensus: boolean;
  weight: number;
}

export interface ConsensusAssessment {
  dm_id: string;
  per_alternative: Record<string, AlternativeAssessment>;
  consensus_count: number;
  majority_reached: boolean;
}

export interface RoundReport {
  round: number;
  assessments: Record<string, ConsensusAssessment>;
  must_revise: string[];
  all_majority: boolean;
}

export interface AggregationResult {
  contributions: Record<string, Record<string, number>>;
  totals: Record<string, number>;
  ranking: string[];
  forced: boolean;
}

export interface CreatedParticipant extends Participant {
  token: string;
}

export interface CreatedSession {
  session_id: string;
  sdm_id: string;
  participants: CreatedParticipant[];
}

export interface SubmitResponse {
  dm_id: string;
  evaluation: Record<string, number>;
}

export interface ApiError {
  code: "VALIDATION" | "NOT_FOUND" | "FORBIDDEN" | "CONFLICT" | "PREMATURE";
  message: string;
  detail?: string;
}
