/**
 * Browser wiring. Everything stateful lives here; the other modules are
 * pure (builder, transcript, results, regionPlot) or transport (api).
 *
 * The page is a thin terminal over the HTTP service: each action maps to
 * one endpoint, the service renders all dialogue text, and the log shows
 * exactly what a CLI session would have shown. Optimistic concurrency:
 * every mutation sends the last seen version and a 409 refreshes state
 * instead of overwriting someone else's edit.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  buildConstraint,
  categoricalFeatures,
  numericFeatures,
  DraftError,
  RELATIONS,
  type ConstraintDraft,
  type NumericTerm,
} from "./builder.js";
import { regionPlot, drawableCount, type PlotPoint } from "./regionPlot.js";
import { regionList, solveReport } from "./results.js";
import { escapeHtml, transcriptHtml } from "./transcript.js";
import type { SessionState, SolveData, TranscriptEntry } from "./types.js";

interface AppState {
  client: ApiClient;
  sessionId: string | null;
  version: number;
  session: SessionState | null;
  entries: TranscriptEntry[];
  lastSolve: SolveData | null;
}

const state: AppState = {
  client: new ApiClient(""),
  sessionId: null,
  version: 0,
  session: null,
  entries: [],
  lastSolve: null,
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function setStatus(text: string, isError = false): void {
  const box = el<HTMLElement>("status");
  box.textContent = text;
  box.className = isError ? "status error" : "status";
}

/** Parse errors point at a position; show a caret under the text. */
function describeError(err: unknown, text?: string): string {
  if (err instanceof ApiError) {
    if (err.detail.position !== undefined && text !== undefined) {
      return `${err.detail.error}\n${text}\n${" ".repeat(err.detail.position)}^`;
    }
    if (err.status === 409) {
      return `${err.detail.error} (state refreshed, try again)`;
    }
    return err.detail.error;
  }
  if (err instanceof DraftError) {
    return err.message;
  }
  return String(err);
}

function log(command: string, output: string[]): void {
  state.entries.push({ command, output });
  const box = el<HTMLElement>("log");
  box.innerHTML = transcriptHtml(state.entries);
  box.scrollTop = box.scrollHeight;
}

async function refresh(): Promise<void> {
  if (!state.sessionId) {
    return;
  }
  state.session = await state.client.getSession(state.sessionId);
  state.version = state.session.version;
  renderSession();
}

/**
 * Run one mutating call: log the dialogue command it corresponds to,
 * append the rendered lines, refresh the session snapshot. On failure the
 * error text goes into the log too, mirroring the CLI.
 */
async function perform(
  command: string,
  call: () => Promise<{ lines: string[]; version: number }>,
  sourceText?: string,
): Promise<boolean> {
  try {
    const result = await call();
    log(command, result.lines);
    state.version = result.version;
    await refresh();
    setStatus("ok");
    return true;
  } catch (err) {
    log(command, [`error: ${describeError(err, sourceText)}`]);
    if (err instanceof ApiError && err.status === 409) {
      await refresh();
    }
    setStatus(describeError(err, sourceText), true);
    return false;
  }
}

// ---------------------------------------------------------------- session

async function createFromTree(): Promise<void> {
  const raw = el<HTMLTextAreaElement>("tree-json").value.trim();
  if (!raw) {
    setStatus("paste a tree document first", true);
    return;
  }
  let tree: unknown;
  try {
    tree = JSON.parse(raw);
  } catch (err) {
    setStatus(`not valid JSON: ${String(err)}`, true);
    return;
  }
  await startSession(() => state.client.createSessionFromTree(tree));
}

async function createFromCsv(): Promise<void> {
  const csv = el<HTMLTextAreaElement>("csv-text").value;
  const label = el<HTMLInputElement>("csv-label").value.trim();
  const depthRaw = el<HTMLInputElement>("csv-depth").value.trim();
  if (!csv.trim() || !label) {
    setStatus("need CSV text and a label column", true);
    return;
  }
  const depth = depthRaw ? Number(depthRaw) : undefined;
  await startSession(() =>
    state.client.createSessionFromCsv(csv, label, depth),
  );
}

async function startSession(
  create: () => Promise<{ session_id: string; version: number; warnings: string[] }>,
): Promise<void> {
  try {
    const created = await create();
    state.sessionId = created.session_id;
    state.version = created.version;
    state.entries = [];
    state.lastSolve = null;
    el<HTMLElement>("log").innerHTML = "";
    el<HTMLElement>("results").innerHTML = "";
    el<HTMLElement>("region-plot").innerHTML = "";
    await refresh();
    const warn = created.warnings.length
      ? `; warnings: ${created.warnings.join("; ")}`
      : "";
    setStatus(`session ${created.session_id}${warn}`);
  } catch (err) {
    setStatus(describeError(err), true);
  }
}

function renderSession(): void {
  const session = state.session;
  const main = el<HTMLElement>("workbench");
  if (!session) {
    main.hidden = true;
    return;
  }
  main.hidden = false;
  el<HTMLElement>("session-meta").textContent =
    `session ${session.session_id} v${session.version} ` +
    `classes: ${session.classes.join(", ")}`;

  const schema = el<HTMLElement>("schema-table");
  schema.innerHTML = session.schema
    .map((f) => {
      const domain =
        f.kind === "categorical"
          ? f.values.join(", ")
          : `[${f.min}, ${f.max}]`;
      return (
        `<tr><td>${escapeHtml(f.name)}</td><td>${f.kind}</td>` +
        `<td>${escapeHtml(domain)}</td></tr>`
      );
    })
    .join("");

  const instances = el<HTMLElement>("instance-table");
  instances.innerHTML = session.instances
    .map((i) => {
      const values = Object.entries(i.values)
        .map(([k, v]) => `${k}=${v}`)
        .join(" ");
      return (
        `<tr><td>${escapeHtml(i.name)}</td>` +
        `<td>${escapeHtml(i.label ?? "?")}</td>` +
        `<td>${escapeHtml(i.minconf)}</td>` +
        `<td class="values">${escapeHtml(values)}</td></tr>`
      );
    })
    .join("");

  const constraints = el<HTMLElement>("constraint-table");
  constraints.innerHTML = session.constraints
    .map((c) => {
      const kind = c.declaration ? "decl" : `#${c.id}`;
      const retract = c.declaration
        ? c.atoms.map(
            (a) =>
              `<button class="retract" data-key="${escapeHtml(a)}">retract ${escapeHtml(a)}</button>`,
          ).join(" ")
        : `<button class="retract" data-key="${c.id}">retract</button>`;
      return (
        `<tr><td>${kind}</td><td><code>${escapeHtml(c.source)}</code></td>` +
        `<td><code>${escapeHtml(c.atoms.join(", "))}</code></td>` +
        `<td>${retract}</td></tr>`
      );
    })
    .join("");

  renderInstanceForm(session);
  renderBuilderForm(session);
  renderSolveForm(session);
  renderRegionPicker(session);
}

// --------------------------------------------------------------- instance

function renderInstanceForm(session: SessionState): void {
  const rows = el<HTMLElement>("instance-fields");
  rows.innerHTML = session.schema
    .map((f) => {
      const input =
        f.kind === "categorical"
          ? `<select data-feature="${escapeHtml(f.name)}"><option value=""></option>` +
            f.values
              .map((v) => `<option>${escapeHtml(v)}</option>`)
              .join("") +
            `</select>`
          : `<input data-feature="${escapeHtml(f.name)}" ` +
            `placeholder="${f.min} .. ${f.max}">`;
      return `<label>${escapeHtml(f.name)} ${input}</label>`;
    })
    .join("");

  const labelSel = el<HTMLSelectElement>("instance-label");
  labelSel.innerHTML =
    `<option value="">(free)</option>` +
    session.classes.map((c) => `<option>${escapeHtml(c)}</option>`).join("");
}

async function declareInstance(): Promise<void> {
  const name = el<HTMLInputElement>("instance-name").value.trim();
  if (!name) {
    setStatus("instance needs a name", true);
    return;
  }
  const values: Record<string, string> = {};
  const parts: string[] = [`instance ${name}`];
  for (const widget of el<HTMLElement>("instance-fields").querySelectorAll<
    HTMLInputElement | HTMLSelectElement
  >("[data-feature]")) {
    const value = widget.value.trim();
    if (value) {
      const feature = widget.dataset.feature!;
      values[feature] = value;
      parts.push(`${feature}=${value}`);
    }
  }
  const label = el<HTMLSelectElement>("instance-label").value || undefined;
  const minconf = el<HTMLInputElement>("instance-minconf").value.trim() || undefined;
  if (label) {
    parts.push(`label=${label}`);
  }
  if (minconf) {
    parts.push(`minconf=${minconf}`);
  }
  const ok = await perform(parts.join(" "), () =>
    state.client.declareInstance(
      state.sessionId!,
      name,
      values,
      label,
      minconf,
      state.version,
    ),
  );
  if (ok) {
    el<HTMLInputElement>("instance-name").value = "";
  }
}

// ---------------------------------------------------------------- builder

interface TermRowRefs {
  coefficient: HTMLInputElement;
  instance: HTMLSelectElement;
  feature: HTMLSelectElement;
}

const termRows: { left: TermRowRefs[]; right: TermRowRefs[] } = {
  left: [],
  right: [],
};

function termRow(session: SessionState, side: "left" | "right"): HTMLElement {
  const row = document.createElement("div");
  row.className = "term-row";
  const coefficient = document.createElement("input");
  coefficient.placeholder = "coef";
  coefficient.size = 5;
  const instance = document.createElement("select");
  instance.innerHTML = session.instances
    .map((i) => `<option>${escapeHtml(i.name)}</option>`)
    .join("");
  const feature = document.createElement("select");
  feature.innerHTML = numericFeatures(session.schema)
    .map((f) => `<option>${escapeHtml(f.name)}</option>`)
    .join("");
  const remove = document.createElement("button");
  remove.textContent = "x";
  remove.type = "button";
  remove.addEventListener("click", () => {
    row.remove();
    const rows = termRows[side];
    rows.splice(
      rows.findIndex((r) => r.coefficient === coefficient),
      1,
    );
    previewDraft();
  });
  for (const widget of [coefficient, instance, feature]) {
    widget.addEventListener("change", previewDraft);
    widget.addEventListener("input", previewDraft);
  }
  row.append(coefficient, instance, document.createTextNode("."), feature, remove);
  termRows[side].push({ coefficient, instance, feature });
  return row;
}

function readTerms(rows: TermRowRefs[]): NumericTerm[] {
  return rows.map((r) => ({
    instance: r.instance.value,
    feature: r.feature.value,
    coefficient: r.coefficient.value.trim() || undefined,
  }));
}

function currentDraft(): ConstraintDraft {
  const session = state.session!;
  const mode = el<HTMLSelectElement>("builder-mode").value;
  if (mode === "numeric") {
    return {
      kind: "numeric",
      left: readTerms(termRows.left),
      relation: el<HTMLSelectElement>("builder-rel").value as never,
      rightTerms: readTerms(termRows.right),
      rightConstant:
        el<HTMLInputElement>("builder-const").value.trim() || undefined,
    };
  }
  const feature = el<HTMLSelectElement>("builder-cat-feature").value;
  const spec = categoricalFeatures(session.schema).find(
    (f) => f.name === feature,
  );
  const instance = el<HTMLSelectElement>("builder-cat-instance").value;
  if (mode === "categoryPin") {
    return {
      kind: "categoryPin",
      instance,
      feature,
      value: el<HTMLSelectElement>("builder-cat-value").value || spec?.values[0] || "",
    };
  }
  if (mode === "categoryTie") {
    return {
      kind: "categoryTie",
      feature,
      leftInstance: instance,
      rightInstance: el<HTMLSelectElement>("builder-cat-other").value,
    };
  }
  return {
    kind: "coordinatePin",
    instance,
    feature,
    value: el<HTMLSelectElement>("builder-cat-value").value || spec?.values[0] || "",
    on: el<HTMLSelectElement>("builder-coord-on").value === "1",
  };
}

let previewTimer: ReturnType<typeof setTimeout> | undefined;

function previewDraft(): void {
  const preview = el<HTMLElement>("builder-preview");
  let text: string;
  try {
    text = buildConstraint(currentDraft());
  } catch (err) {
    preview.textContent = describeError(err);
    preview.className = "preview error";
    return;
  }
  preview.textContent = text;
  preview.className = "preview";
  // Echo the canonical atoms the service would derive, debounced.
  clearTimeout(previewTimer);
  previewTimer = setTimeout(async () => {
    if (!state.sessionId) {
      return;
    }
    try {
      const echoed = await state.client.parse(state.sessionId, text);
      preview.textContent = `${text}\n-> ${echoed.atoms.join(", ")}`;
    } catch (err) {
      preview.textContent = `${text}\n${describeError(err, text)}`;
      preview.className = "preview error";
    }
  }, 250);
}

function renderBuilderForm(session: SessionState): void {
  const relation = el<HTMLSelectElement>("builder-rel");
  if (!relation.options.length) {
    relation.innerHTML = RELATIONS.map((r) => `<option>${r}</option>`).join("");
  }
  const hasInstances = session.instances.length > 0;
  el<HTMLElement>("builder").hidden = !hasInstances;
  if (!hasInstances) {
    return;
  }

  const instanceOptions = session.instances
    .map((i) => `<option>${escapeHtml(i.name)}</option>`)
    .join("");
  el<HTMLSelectElement>("builder-cat-instance").innerHTML = instanceOptions;
  el<HTMLSelectElement>("builder-cat-other").innerHTML = instanceOptions;

  const categorical = categoricalFeatures(session.schema);
  const catFeature = el<HTMLSelectElement>("builder-cat-feature");
  catFeature.innerHTML = categorical
    .map((f) => `<option>${escapeHtml(f.name)}</option>`)
    .join("");
  syncCategoryValues();

  if (termRows.left.length === 0) {
    el<HTMLElement>("terms-left").append(termRow(session, "left"));
  }
}

function syncCategoryValues(): void {
  const session = state.session;
  if (!session) {
    return;
  }
  const feature = el<HTMLSelectElement>("builder-cat-feature").value;
  const spec = categoricalFeatures(session.schema).find(
    (f) => f.name === feature,
  );
  el<HTMLSelectElement>("builder-cat-value").innerHTML = (spec?.values ?? [])
    .map((v) => `<option>${escapeHtml(v)}</option>`)
    .join("");
}

function syncBuilderMode(): void {
  const mode = el<HTMLSelectElement>("builder-mode").value;
  el<HTMLElement>("builder-numeric").hidden = mode !== "numeric";
  el<HTMLElement>("builder-categorical").hidden = mode === "numeric";
  el<HTMLElement>("builder-cat-value-wrap").hidden = mode === "categoryTie";
  el<HTMLElement>("builder-cat-other-wrap").hidden = mode !== "categoryTie";
  el<HTMLElement>("builder-coord-wrap").hidden = mode !== "coordinatePin";
  previewDraft();
}

async function addBuiltConstraint(): Promise<void> {
  let text: string;
  try {
    text = buildConstraint(currentDraft());
  } catch (err) {
    setStatus(describeError(err), true);
    return;
  }
  await submitConstraint(text);
}

async function addRawConstraint(): Promise<void> {
  const text = el<HTMLInputElement>("raw-constraint").value.trim();
  if (!text) {
    return;
  }
  if (await submitConstraint(text)) {
    el<HTMLInputElement>("raw-constraint").value = "";
  }
}

function submitConstraint(text: string): Promise<boolean> {
  return perform(
    `constraint ${text}`,
    () => state.client.addConstraint(state.sessionId!, text, state.version),
    text,
  );
}

async function retractKey(key: string): Promise<void> {
  await perform(`retract ${key}`, () =>
    state.client.retract(state.sessionId!, key, state.version),
  );
}

// ------------------------------------------------------------------ solve

function renderSolveForm(session: SessionState): void {
  const names = session.instances.map((i) => i.name);
  el<HTMLElement>("minimize-boxes").innerHTML = names
    .map(
      (n) =>
        `<label><input type="checkbox" data-minimize="${escapeHtml(n)}" checked> ` +
        `${escapeHtml(n)}</label>`,
    )
    .join(" ");
  el<HTMLElement>("solve").hidden = names.length === 0;
}

async function runSolve(): Promise<void> {
  const minimizeOn = el<HTMLInputElement>("solve-minimize").checked;
  const chosen = [
    ...el<HTMLElement>("minimize-boxes").querySelectorAll<HTMLInputElement>(
      "input:checked",
    ),
  ].map((box) => box.dataset.minimize!);
  const minimize =
    minimizeOn && chosen.length > 0 ? `l1norm(${chosen.join(",")})` : undefined;
  const projectRaw = el<HTMLInputElement>("solve-project").value.trim();
  const project = projectRaw
    ? projectRaw.split(",").map((s) => s.trim()).filter(Boolean)
    : undefined;
  const verbose = Number(el<HTMLSelectElement>("solve-verbose").value) as 0 | 1 | 2;

  const parts = ["solveopt"];
  if (minimize) {
    parts.push(`minimize=${minimize}`);
  }
  if (project) {
    parts.push(`project=${project.join(",")}`);
  }
  parts.push(`verbose=${verbose}`);

  try {
    const data = await state.client.solveOpt(state.sessionId!, {
      minimize,
      project,
      verbose,
      expectedVersion: state.version,
    });
    log(parts.join(" "), data.lines);
    state.lastSolve = data;
    el<HTMLElement>("results").innerHTML = solveReport(data);
    setStatus(`${data.solutions.length} solution(s)`);
  } catch (err) {
    log(parts.join(" "), [`error: ${describeError(err)}`]);
    setStatus(describeError(err), true);
  }
}

// ---------------------------------------------------------------- regions

function renderRegionPicker(session: SessionState): void {
  const pick = el<HTMLSelectElement>("region-instance");
  const current = pick.value;
  pick.innerHTML = session.instances
    .map((i) => `<option>${escapeHtml(i.name)}</option>`)
    .join("");
  if (current) {
    pick.value = current;
  }
  el<HTMLElement>("regions").hidden = session.instances.length === 0;
}

async function showRegions(): Promise<void> {
  const instance = el<HTMLSelectElement>("region-instance").value;
  if (!instance || !state.sessionId) {
    return;
  }
  try {
    const payload = await state.client.regions(state.sessionId, instance);
    const points: PlotPoint[] = [];
    const witness = state.lastSolve?.solutions[0]?.witness?.[instance];
    const numeric = numericFeatures(state.session!.schema);
    if (witness && numeric.length === 2) {
      points.push({
        x: witness[numeric[0]!.name] ?? "0",
        y: witness[numeric[1]!.name] ?? "0",
        label: instance,
      });
    }
    el<HTMLElement>("region-plot").innerHTML = regionPlot(payload, points);
    el<HTMLElement>("region-list").innerHTML = regionList(payload);
    setStatus(
      `${payload.regions.length} region(s), ${drawableCount(payload)} drawable`,
    );
  } catch (err) {
    setStatus(describeError(err), true);
  }
}

// ------------------------------------------------------------------ wiring

export function main(): void {
  el<HTMLButtonElement>("create-tree").addEventListener("click", createFromTree);
  el<HTMLButtonElement>("create-csv").addEventListener("click", createFromCsv);
  el<HTMLButtonElement>("declare").addEventListener("click", declareInstance);
  el<HTMLButtonElement>("add-built").addEventListener("click", addBuiltConstraint);
  el<HTMLButtonElement>("add-raw").addEventListener("click", addRawConstraint);
  el<HTMLButtonElement>("run-solve").addEventListener("click", runSolve);
  el<HTMLButtonElement>("show-regions").addEventListener("click", showRegions);
  el<HTMLSelectElement>("builder-mode").addEventListener("change", syncBuilderMode);
  el<HTMLSelectElement>("builder-cat-feature").addEventListener("change", () => {
    syncCategoryValues();
    previewDraft();
  });
  for (const id of [
    "builder-cat-instance",
    "builder-cat-other",
    "builder-cat-value",
    "builder-coord-on",
    "builder-rel",
  ]) {
    el<HTMLSelectElement>(id).addEventListener("change", previewDraft);
  }
  el<HTMLInputElement>("builder-const").addEventListener("input", previewDraft);
  el<HTMLButtonElement>("term-add-left").addEventListener("click", () => {
    el<HTMLElement>("terms-left").append(termRow(state.session!, "left"));
  });
  el<HTMLButtonElement>("term-add-right").addEventListener("click", () => {
    el<HTMLElement>("terms-right").append(termRow(state.session!, "right"));
  });
  el<HTMLInputElement>("raw-constraint").addEventListener("keydown", (e) => {
    if (e.key === "Enter") {
      void addRawConstraint();
    }
  });
  el<HTMLElement>("constraint-table").addEventListener("click", (e) => {
    const target = e.target as HTMLElement;
    if (target.matches("button.retract")) {
      void retractKey(target.dataset.key!);
    }
  });
  syncBuilderMode();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", main);
}
