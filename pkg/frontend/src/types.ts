// Wire types mirroring the JSON the service emits. The UI never computes
// statistics itself; these are read-only projections.

export type Polarity = "satisfied" | "denied";
export type ObjectiveKey = "o1" | "o2" | "o3" | "o4";

export const OBJECTIVE_KEYS: ObjectiveKey[] = ["o1", "o2", "o3", "o4"];

export const OBJECTIVE_LABELS: Record<ObjectiveKey, string> = {
  o1: "cost",
  o2: "unresolved",
  o3: "goal coverage",
  o4: "softgoal coverage",
};

export interface Violation {
  rule: string;
  subject: string;
  message: string;
}

export interface ModelRegistration {
  model_id: string;
  validation: { valid: boolean; violations: Violation[] };
}

export interface DecisionEntry {
  node: string;
  polarity: Polarity;
  value: number;
  support: Record<string, number>;
  probability: Record<string, number>;
}

export interface CurvePoint {
  x: number;
  median: Record<string, number>;
  iqr: Record<string, number>;
  median_smoothed?: Record<string, number>;
  iqr_smoothed?: Record<string, number>;
}

export interface Curve {
  decisions: [string, Polarity][];
  objectives: ObjectiveKey[];
  points: CurvePoint[];
}

export interface KeyReport {
  kappa: number;
  keys: [string, Polarity][];
  baseline_iqr: Record<string, number>;
  residual_iqr: Record<string, number>;
  collapse_ratio: Record<string, number>;
  collapsed: boolean;
  threshold: number;
}

export interface RunResults {
  ordering: { entries: DecisionEntry[] };
  curve: Curve;
  report: KeyReport;
  pinned: [string, Polarity][];
  objectives: ObjectiveKey[];
  seed: number;
  stale: boolean;
}

export interface SessionView {
  session_id: string;
  model_id: string;
  seed: number;
  pinned: [string, Polarity][];
  objectives: ObjectiveKey[];
  stale: boolean;
  has_results: boolean;
  results?: RunResults;
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
