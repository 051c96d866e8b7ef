/**
 * Structured constraint drafts and their text form.
 *
 * The builder never does arithmetic. It assembles the textual grammar the
 * service parses (numbers stay strings end to end) and validates only what
 * the form widgets cannot express: empty term lists, zero coefficients,
 * malformed number literals.
 *
 * Grammar notes the widgets rely on:
 *  - relations are <=, <, =, >=, >; there is no "!=". A negative
 *    categorical fact is the coordinate pin `I.feat[Value] = 0`.
 *  - categorical equality across instances (`A.feat = B.feat`) is legal
 *    when both sides range over the same values.
 */

import type {
  CategoricalSpec,
  FeatureSpec,
  NumericSpec,
  SessionState,
} from "./types.js";

export type Relation = "<=" | "<" | "=" | ">=" | ">";

export const RELATIONS: readonly Relation[] = ["<=", "<", "=", ">=", ">"];

/** One linear term: `coefficient * instance.feature`. */
export interface NumericTerm {
  instance: string;
  feature: string;
  /** Exact literal: "2", "-1", "3/2", "0.25". Omitted means 1. */
  coefficient?: string;
}

export interface NumericDraft {
  kind: "numeric";
  left: NumericTerm[];
  relation: Relation;
  /** Right side: terms, a constant, or both (joined with +). */
  rightTerms?: NumericTerm[];
  rightConstant?: string;
}

/** `instance.feature = Value` */
export interface CategoryPinDraft {
  kind: "categoryPin";
  instance: string;
  feature: string;
  value: string;
}

/** `left.feature = right.feature` over a shared categorical domain. */
export interface CategoryTieDraft {
  kind: "categoryTie";
  feature: string;
  leftInstance: string;
  rightInstance: string;
}

/** `instance.feature[Value] = 0|1` */
export interface CoordinatePinDraft {
  kind: "coordinatePin";
  instance: string;
  feature: string;
  value: string;
  on: boolean;
}

export type ConstraintDraft =
  | NumericDraft
  | CategoryPinDraft
  | CategoryTieDraft
  | CoordinatePinDraft;

export class DraftError extends Error {}

const NUMBER = /^-?(\d+(\.\d+)?|\d+\/[1-9]\d*)$/;

function checkNumber(literal: string, what: string): string {
  if (!NUMBER.test(literal)) {
    throw new DraftError(`${what} must be an integer, decimal or fraction, got "${literal}"`);
  }
  return literal;
}

function renderTerm(term: NumericTerm, first: boolean): string {
  const name = `${term.instance}.${term.feature}`;
  const coefficient = term.coefficient ?? "1";
  checkNumber(coefficient, "coefficient");
  if (/^-?0+(\.0+)?$/.test(coefficient)) {
    throw new DraftError("coefficient must be nonzero");
  }
  const negative = coefficient.startsWith("-");
  const magnitude = negative ? coefficient.slice(1) : coefficient;
  const body = magnitude === "1" ? name : `${magnitude}*${name}`;
  if (first) {
    return negative ? `-${body}` : body;
  }
  return negative ? ` - ${body}` : ` + ${body}`;
}

function renderSide(terms: NumericTerm[], constant?: string): string {
  const parts = terms.map((t, i) => renderTerm(t, i === 0));
  let out = parts.join("");
  if (constant !== undefined) {
    checkNumber(constant, "constant");
    if (out === "") {
      out = constant;
    } else if (constant.startsWith("-")) {
      out += ` - ${constant.slice(1)}`;
    } else {
      out += ` + ${constant}`;
    }
  }
  if (out === "") {
    throw new DraftError("a side needs at least one term or a constant");
  }
  return out;
}

export function buildConstraint(draft: ConstraintDraft): string {
  switch (draft.kind) {
    case "numeric": {
      if (draft.left.length === 0) {
        throw new DraftError("left side needs at least one term");
      }
      const left = renderSide(draft.left);
      const right = renderSide(draft.rightTerms ?? [], draft.rightConstant);
      return `${left} ${draft.relation} ${right}`;
    }
    case "categoryPin":
      return `${draft.instance}.${draft.feature} = ${draft.value}`;
    case "categoryTie":
      return `${draft.leftInstance}.${draft.feature} = ${draft.rightInstance}.${draft.feature}`;
    case "coordinatePin":
      return `${draft.instance}.${draft.feature}[${draft.value}] = ${draft.on ? "1" : "0"}`;
  }
}

/** Feature lookup helpers for the form widgets. */
export function numericFeatures(schema: FeatureSpec[]): NumericSpec[] {
  return schema.filter((f): f is NumericSpec => f.kind !== "categorical");
}

export function categoricalFeatures(schema: FeatureSpec[]): CategoricalSpec[] {
  return schema.filter((f): f is CategoricalSpec => f.kind === "categorical");
}

export function instanceNames(state: SessionState): string[] {
  return state.instances.map((i) => i.name);
}
