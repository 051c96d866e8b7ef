/**
 * Payload shapes of the HTTP/JSON service, transcribed by hand.
 *
 * Exact rational values always travel as strings ("19.0", "5119/99999").
 * Wherever the service also ships a float, the field name says so and the
 * value is an approximation for plotting only, never for display.
 */

export type FeatureKind = "categorical" | "ordinal" | "continuous";

export interface CategoricalSpec {
  name: string;
  kind: "categorical";
  values: string[];
}

export interface NumericSpec {
  name: string;
  kind: "ordinal" | "continuous";
  min: number | string;
  max: number | string;
}

export type FeatureSpec = CategoricalSpec | NumericSpec;

export interface SessionCreated {
  session_id: string;
  version: number;
  classes: string[];
  warnings: string[];
}

export interface InstanceSummary {
  name: string;
  label: string | null;
  minconf: string;
  values: Record<string, string>;
}

export interface ConstraintRow {
  id: number;
  source: string;
  atoms: string[];
  declaration: boolean;
}

export interface SessionState {
  session_id: string;
  version: number;
  classes: string[];
  schema: FeatureSpec[];
  instances: InstanceSummary[];
  constraints: ConstraintRow[];
}

/** Common to every mutating call: rendered lines plus the new version. */
export interface CommandResult {
  lines: string[];
  version: number;
  [extra: string]: unknown;
}

export interface Distance {
  value: string;
  float: number;
  attained: boolean;
}

export interface Solution {
  paths: Record<string, number>;
  rules: Record<string, string>;
  answer_atoms: string[];
  answer_items: string[];
  witness: Record<string, Record<string, string>>;
  global_optimum: boolean;
  lp_relaxation: boolean;
  distance: Distance | null;
}

export interface SolveData extends CommandResult {
  solutions: Solution[];
  budget_exceeded: Record<string, number>[];
}

export interface PathRow {
  path_id: number;
  label: string;
  confidence: string;
  rule: string;
}

export interface RegionEntry {
  path_id: number;
  label: string;
  confidence: string;
  atoms: string[];
  vertices?: [string, string][];
}

export interface RegionsPayload {
  instance: string;
  regions: RegionEntry[];
}

export interface TranscriptEntry {
  command: string;
  output: string[];
}

export interface ApiErrorDetail {
  error: string;
  position?: number;
  [extra: string]: unknown;
}
