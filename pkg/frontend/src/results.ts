/**
 * Solution cards. Every number shown to the user is the exact string the
 * service sent (path confidences, witness coordinates, distances). The
 * float fields exist for plot layout and never reach this module's output.
 */

import { escapeHtml } from "./transcript.js";
import type { RegionsPayload, SolveData, Solution } from "./types.js";

function badge(text: string, cls: string): string {
  return `<span class="badge ${cls}">${escapeHtml(text)}</span>`;
}

function witnessTable(witness: Record<string, Record<string, string>>): string {
  const instances = Object.keys(witness);
  if (instances.length === 0) {
    return "";
  }
  const first = witness[instances[0]!]!;
  const features = Object.keys(first);
  const head =
    "<tr><th></th>" +
    features.map((f) => `<th>${escapeHtml(f)}</th>`).join("") +
    "</tr>";
  const rows = instances.map((name) => {
    const values = witness[name]!;
    const cells = features
      .map((f) => `<td>${escapeHtml(values[f] ?? "")}</td>`)
      .join("");
    return `<tr><th>${escapeHtml(name)}</th>${cells}</tr>`;
  });
  return `<table class="witness">${head}${rows.join("")}</table>`;
}

export function solutionCard(solution: Solution, index: number): string {
  const parts: string[] = [];
  const badges: string[] = [];
  if (solution.distance !== null) {
    const attained = solution.distance.attained ? "" : " (not attained)";
    badges.push(
      badge(`distance ${solution.distance.value}${attained}`, "distance"),
    );
    if (solution.global_optimum) {
      badges.push(badge("global optimum", "optimum"));
    }
  }
  if (solution.lp_relaxation) {
    badges.push(badge("LP relaxation", "relaxation"));
  }
  parts.push(
    `<header><h3>Solution ${index + 1}</h3>${badges.join(" ")}</header>`,
  );
  for (const [instance, rule] of Object.entries(solution.rules)) {
    parts.push(
      `<div class="rule"><span class="who">${escapeHtml(instance)}</span>` +
        `<code>${escapeHtml(rule)}</code></div>`,
    );
  }
  if (solution.answer_items.length > 0) {
    const items = solution.answer_items
      .map((a) => `<li><code>${escapeHtml(a)}</code></li>`)
      .join("");
    parts.push(`<ul class="answer">${items}</ul>`);
  }
  parts.push(witnessTable(solution.witness));
  return `<article class="solution">${parts.join("\n")}</article>`;
}

export function solveReport(data: SolveData): string {
  if (data.solutions.length === 0) {
    return `<p class="empty">No solution exists.</p>`;
  }
  const cards = data.solutions.map(solutionCard).join("\n");
  let note = "";
  if (data.budget_exceeded.length > 0) {
    note =
      `<p class="note">Search budget exceeded on ` +
      `${data.budget_exceeded.length} path combination(s); ` +
      `the list may be incomplete.</p>`;
  }
  return cards + note;
}

/** Sidebar listing of a regions payload, exact strings only. */
export function regionList(payload: RegionsPayload): string {
  const rows = payload.regions.map((r) => {
    const atoms = r.atoms.map((a) => escapeHtml(a)).join(", ");
    return (
      `<li><b>path ${r.path_id}</b> label ${escapeHtml(r.label)} ` +
      `[${escapeHtml(r.confidence)}] <code>${atoms}</code></li>`
    );
  });
  return `<ul class="regions">${rows.join("")}</ul>`;
}
