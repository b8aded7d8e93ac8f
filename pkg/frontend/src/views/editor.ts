// Card editor: three independently expandable accordion panels (Name,
// Select Visualization, Select Data) supporting both design flows — task
// first or data first — in any order. Every badge, hint, and violation
// string shown here comes from API responses; the client adds no
// recommendation or validation logic of its own.

import { api, ApiError } from "../api.js";
import { escapeHtml as esc, renderChart } from "../chart.js";
import { illustration } from "../illustrations.js";
import { SequenceGate, Store } from "../store.js";
import type {
  BindingMap,
  CardDoc,
  ChannelRequirement,
  ChartSpecDoc,
  ColumnTypeName,
  DatasetDoc,
  IdiomEntry,
  Recommendation,
  TaskEntry,
  Violation,
} from "../types.js";

type Panel = "name" | "visualization" | "data" | null;

export interface EditorState {
  card: CardDoc | null;
  tasks: TaskEntry[];
  idioms: IdiomEntry[];
  panel: Panel;
  recommendations: Recommendation[] | null;
  dataset: DatasetDoc | null;
  preview: ChartSpecDoc | null;
  violations: Violation[] | null;
  dataMode: "upload" | "generate";
  orderEditorColumn: string | null; // column whose order dictionary is being typed in
  errors: Record<string, string>;
  busy: number;
}

const COLUMN_TYPES: ColumnTypeName[] = ["categorical", "categoricalOrdered", "numerical"];

const LEVEL_BADGE: Record<string, string> = {
  recommended: `<span class="badge up" title="recommended">&#128077;</span>`,
  partiallyCompatible: `<span class="badge half" title="partially compatible">&#128077;</span>`,
  notRecommended: "",
};

export class EditorController {
  readonly store = new Store<EditorState>({
    card: null,
    tasks: [],
    idioms: [],
    panel: null,
    recommendations: null,
    dataset: null,
    preview: null,
    violations: null,
    dataMode: "upload",
    orderEditorColumn: null,
    errors: {},
    busy: 0,
  });

  // Free-typing buffers that must survive re-renders without causing them.
  readonly drafts: { csvText: string; genColumns: { name: string; type: ColumnTypeName }[]; genRows: string } = {
    csvText: "",
    genColumns: [
      { name: "", type: "categorical" },
      { name: "", type: "numerical" },
    ],
    genRows: "",
  };

  private recGate = new SequenceGate();
  private previewGate = new SequenceGate();
  private mutations: Promise<unknown> = Promise.resolve();

  constructor(private done: () => void) {}

  /**
   * Card mutations run strictly one after another so each patch is built
   * from the state the previous one produced, never from a stale snapshot.
   */
  private enqueue<T>(work: () => Promise<T>): Promise<T> {
    const result = this.mutations.then(work);
    this.mutations = result.then(
      () => undefined,
      () => undefined,
    );
    return result;
  }

  async load(cardId: string): Promise<void> {
    const [card, tasks, idioms] = await Promise.all([
      api.card(cardId),
      api.tasks(),
      api.idioms(),
    ]);
    this.store.set({ card, tasks, idioms });
    if (card.datasetId) {
      this.store.set({ dataset: await api.dataset(card.datasetId) });
    }
    await Promise.all([this.refreshRecommendations(), this.refreshPreview()]);
  }

  /** Recommendations always reflect the latest (task, dataset) pair. */
  async refreshRecommendations(): Promise<void> {
    const { card } = this.store.get();
    const token = this.recGate.next();
    if (!card || (card.task === null && card.datasetId === null)) {
      this.store.set({ recommendations: null });
      return;
    }
    const recommendations = await api.recommendations({
      task: card.task,
      datasetId: card.datasetId,
    });
    if (!this.recGate.isCurrent(token)) return; // stale response discarded
    this.store.set({ recommendations });
  }

  async refreshPreview(): Promise<void> {
    const { card } = this.store.get();
    const token = this.previewGate.next();
    if (!card || !card.idiom || !card.datasetId || !card.bindings) {
      this.store.set({ preview: null, violations: null });
      return;
    }
    try {
      const preview = await api.preview({
        idiom: card.idiom,
        datasetId: card.datasetId,
        bindings: card.bindings,
        title: card.name,
      });
      if (!this.previewGate.isCurrent(token)) return;
      this.store.set({ preview, violations: null });
    } catch (error) {
      if (!this.previewGate.isCurrent(token)) return;
      if (error instanceof ApiError && error.code === "invalidBinding") {
        this.store.set({ preview: null, violations: error.details as Violation[] });
        return;
      }
      throw error;
    }
  }

  patchCard(patch: Record<string, unknown>): Promise<void> {
    return this.enqueue(() => this.applyPatch(patch));
  }

  private async applyPatch(patch: Record<string, unknown>): Promise<void> {
    const { card } = this.store.get();
    if (!card) return;
    const updated = await api.patchCard(card.id, patch);
    this.store.set({ card: updated, errors: {} });
    if ("datasetId" in patch) {
      this.store.set({
        dataset: updated.datasetId ? await api.dataset(updated.datasetId) : null,
      });
    }
    const recInputs = "task" in patch || "datasetId" in patch;
    const previewInputs = recInputs || "idiom" in patch || "bindings" in patch || "name" in patch;
    if (recInputs) await this.refreshRecommendations();
    if (previewInputs) await this.refreshPreview();
  }

  async ingestCsv(text: string): Promise<void> {
    try {
      const dataset = await api.uploadCsv(text);
      // New dataset invalidates previous bindings wholesale.
      await this.patchCard({ datasetId: dataset.datasetId, bindings: null });
      this.store.set({ errors: {} });
    } catch (error) {
      this.fail("data", error);
    }
  }

  async generate(rowsText: string): Promise<void> {
    const columns = this.drafts.genColumns.filter((c) => c.name.trim() !== "");
    if (columns.length === 0) {
      this.store.set({ errors: { generate: "Define at least one named column." } });
      return;
    }
    const lines = rowsText.split("\n").map((l) => l.trimEnd()).filter((l) => l !== "");
    const rows = lines.map((l) => l.split(","));
    // Arity checked before submit so a ragged row is flagged inline.
    const ragged = rows.findIndex((r) => r.length !== columns.length);
    if (ragged >= 0) {
      this.store.set({
        errors: { generate: `Row ${ragged + 1} has ${rows[ragged]?.length} cells; expected ${columns.length}.` },
      });
      return;
    }
    try {
      const dataset = await api.generateTable(columns, rows);
      await this.patchCard({ datasetId: dataset.datasetId, bindings: null });
      this.store.set({ errors: {} });
    } catch (error) {
      this.fail("generate", error);
    }
  }

  async setColumnType(column: string, type: ColumnTypeName, orderDictionary?: string[]): Promise<void> {
    const { card } = this.store.get();
    if (!card?.datasetId) return;
    try {
      const dataset = await api.setColumnType(card.datasetId, column, type, orderDictionary);
      const full = await api.dataset(card.datasetId);
      this.store.set({ dataset: full, orderEditorColumn: null, errors: {} });
      void dataset;
      // Column types feed the data signature, so both annotations refresh.
      await this.refreshRecommendations();
      await this.refreshPreview();
    } catch (error) {
      this.fail("column", error);
    }
  }

  setBinding(channel: string, columns: string[]): Promise<void> {
    // Queued as a whole: the merge must see the bindings produced by any
    // mutation already in flight.
    return this.enqueue(async () => {
      const { card } = this.store.get();
      if (!card) return;
      const bindings: BindingMap = { ...(card.bindings ?? {}) };
      if (columns.length === 0) {
        delete bindings[channel];
      } else {
        bindings[channel] = columns;
      }
      await this.applyPatch({ bindings: Object.keys(bindings).length ? bindings : null });
    });
  }

  saveAndClose(): void {
    this.done();
  }

  private fail(slot: string, error: unknown): void {
    if (error instanceof ApiError) {
      const detail = error.details ? ` ${JSON.stringify(error.details)}` : "";
      this.store.set({ errors: { [slot]: `${error.message}${detail}` } });
    } else {
      throw error;
    }
  }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

function namePanel(state: EditorState, open: boolean): string {
  const card = state.card;
  if (!card) return "";
  return `
  <details class="panel" data-panel="name" ${open ? "open" : ""}>
    <summary data-action="open-panel" data-panel="name">Name</summary>
    <div class="panel-body">
      <label>Name <input id="f-name" value="${esc(card.name)}" placeholder="e.g. Exercise performance"></label>
      <label>Goal <input id="f-goal" value="${esc(card.goal)}" placeholder="What do you want to achieve?"></label>
      <label>Question <input id="f-question" value="${esc(card.question)}" placeholder="What do you want to know?"></label>
      <button data-action="apply-name">Apply</button>
    </div>
  </details>`;
}

function taskFilter(state: EditorState): string {
  const current = state.card?.task ?? "";
  const options = state.tasks
    .map((t) => `<option value="${esc(t.task)}" ${t.task === current ? "selected" : ""}>${esc(t.label)}</option>`)
    .join("");
  return `
    <label class="task-filter">Task
      <select id="task-select" data-action="set-task">
        <option value="">(no task)</option>
        ${options}
      </select>
    </label>
    <span class="hint">${esc(state.tasks.find((t) => t.task === current)?.description ?? "Pick a task to see suitable idioms.")}</span>`;
}

function idiomGrid(state: EditorState): string {
  const levels = new Map<string, Recommendation>();
  for (const rec of state.recommendations ?? []) levels.set(rec.idiom, rec);
  const selected = state.card?.idiom;
  const cells = state.idioms
    .map((entry) => {
      const rec = levels.get(entry.idiom);
      const badge = rec ? LEVEL_BADGE[rec.level] ?? "" : "";
      const reasons = rec ? esc(rec.reasons.join(" | ")) : "";
      return `
      <button class="idiom-cell ${selected === entry.idiom ? "selected" : ""} ${rec ? rec.level : ""}"
              data-action="pick-idiom" data-idiom="${esc(entry.idiom)}" title="${reasons}">
        ${illustration(entry.illustrationRef)}
        <span>${esc(entry.label)}</span>${badge}
      </button>`;
    })
    .join("");
  const selectedRec = selected ? levels.get(selected) : undefined;
  const notice = selectedRec && selectedRec.level === "notRecommended"
    ? `<p class="notice">Heads-up: ${esc(selectedRec.reasons.join("; "))}. You can still use it.</p>`
    : "";
  return `<div class="idiom-grid">${cells}</div>${notice}`;
}

function bindingControls(state: EditorState): string {
  const card = state.card;
  if (!card?.idiom) return "";
  if (!state.dataset) {
    return `<p class="hint">Select data to bind columns to the ${esc(card.idiom)} channels.</p>`;
  }
  const entry = state.idioms.find((i) => i.idiom === card.idiom);
  if (!entry) return "";
  const columns = state.dataset.schema.columns;
  const bindings = card.bindings ?? {};

  const controls = entry.channels
    .map((channel) => channelControl(channel, columns, bindings[channel.name] ?? []))
    .join("");
  return `<div class="bindings"><h4>Channels</h4>${controls}</div>`;
}

function channelControl(
  channel: ChannelRequirement,
  columns: { name: string; type: ColumnTypeName }[],
  bound: string[],
): string {
  // Selectable columns are constrained to the channel's admissible types,
  // as declared by the idiom catalog.
  const admissible = columns.filter((c) => channel.admissibleTypes.includes(c.type));
  const hint = `${channel.required ? "required" : "optional"}; accepts ${channel.admissibleTypes.join(", ")}`;
  const multi = channel.maxColumns === null || channel.maxColumns > 1;
  if (multi) {
    const boxes = admissible
      .map((c) => `
        <label class="check">
          <input type="checkbox" data-action="bind-multi" data-channel="${esc(channel.name)}"
                 data-column="${esc(c.name)}" ${bound.includes(c.name) ? "checked" : ""}>
          ${esc(c.name)}
        </label>`)
      .join("");
    return `
      <fieldset class="channel" data-channel="${esc(channel.name)}">
        <legend>${esc(channel.name)} <small>${esc(hint)}</small></legend>
        ${boxes || `<span class="hint">no columns of an admissible type</span>`}
      </fieldset>`;
  }
  const options = admissible
    .map((c) => `<option value="${esc(c.name)}" ${bound[0] === c.name ? "selected" : ""}>${esc(c.name)}</option>`)
    .join("");
  return `
    <fieldset class="channel" data-channel="${esc(channel.name)}">
      <legend>${esc(channel.name)} <small>${esc(hint)}</small></legend>
      <select data-action="bind-single" data-channel="${esc(channel.name)}">
        <option value="">(unbound)</option>
        ${options}
      </select>
    </fieldset>`;
}

function previewArea(state: EditorState): string {
  if (state.violations) {
    const items = state.violations
      .map((v) => `<li><code>${esc(v.channel)}</code> ${esc(v.message)}</li>`)
      .join("");
    return `<div class="violations"><h4>Binding problems</h4><ul>${items}</ul></div>`;
  }
  if (state.preview) {
    const notes = state.preview.notes.length
      ? `<p class="hint">${esc(state.preview.notes.join(" | "))}</p>`
      : "";
    return `<div class="preview" id="chart-preview">${renderChart(state.preview)}${notes}</div>`;
  }
  return `<p class="hint" id="chart-preview">Preview appears when an idiom, data, and bindings are set.</p>`;
}

function visualizationPanel(state: EditorState, open: boolean): string {
  return `
  <details class="panel" data-panel="visualization" ${open ? "open" : ""}>
    <summary data-action="open-panel" data-panel="visualization">Select Visualization</summary>
    <div class="panel-body">
      ${taskFilter(state)}
      ${idiomGrid(state)}
      ${bindingControls(state)}
      ${previewArea(state)}
    </div>
  </details>`;
}

function schemaTable(state: EditorState): string {
  const dataset = state.dataset;
  if (!dataset) return "";
  const columns = dataset.schema.columns;
  // Top header row: column types; second header row: column names.
  const typeCells = columns
    .map((c) => {
      const options = COLUMN_TYPES
        .map((t) => `<option value="${t}" ${t === c.type ? "selected" : ""}>${t}</option>`)
        .join("");
      return `<th class="type-cell">
        <select data-action="set-column-type" data-column="${esc(c.name)}">${options}</select>
        ${c.inferred ? `<small class="hint">auto</small>` : `<small class="hint">manual</small>`}
      </th>`;
    })
    .join("");
  const nameCells = columns.map((c) => `<th>${esc(c.name)}</th>`).join("");
  const rows = (dataset.rows ?? [])
    .slice(0, 8)
    .map((r) => `<tr>${r.map((cell) => `<td>${esc(cell)}</td>`).join("")}</tr>`)
    .join("");
  const orderEditor = state.orderEditorColumn
    ? orderDictionaryEditor(state, state.orderEditorColumn)
    : "";
  const warnings = dataset.schema.warnings.length
    ? `<p class="notice">${esc(dataset.schema.warnings.join(" | "))}</p>`
    : "";
  return `
    <h4>Data preview</h4>
    <table class="schema-table" id="schema-preview">
      <thead><tr>${typeCells}</tr><tr>${nameCells}</tr></thead>
      <tbody>${rows}</tbody>
    </table>
    ${orderEditor}${warnings}`;
}

function orderDictionaryEditor(state: EditorState, column: string): string {
  const values = state.dataset?.rows
    ? [...new Set(state.dataset.rows
        .map((r) => r[state.dataset!.schema.columns.findIndex((c) => c.name === column)] ?? "")
        .filter((v) => v.trim() !== ""))]
    : [];
  return `
    <div class="order-editor" id="order-editor">
      <label>Order for <strong>${esc(column)}</strong> (comma-separated, first = lowest)
        <input id="order-values" value="${esc(values.join(", "))}">
      </label>
      <button data-action="apply-ordered" data-column="${esc(column)}">Apply order</button>
    </div>`;
}

function dataPanel(state: EditorState, ctrl: EditorController, open: boolean): string {
  const mode = state.dataMode;
  const genColumns = ctrl.drafts.genColumns
    .map((c, i) => `
      <div class="gen-col">
        <input data-gen-name="${i}" placeholder="column name" value="${esc(c.name)}">
        <select data-gen-type="${i}">
          ${COLUMN_TYPES.map((t) => `<option value="${t}" ${t === c.type ? "selected" : ""}>${t}</option>`).join("")}
        </select>
      </div>`)
    .join("");
  const upload = `
    <div class="data-upload" ${mode === "upload" ? "" : "hidden"}>
      <input type="file" id="csv-file" accept=".csv,text/csv" data-action="csv-file">
      <p class="hint">or paste CSV (first line = header):</p>
      <textarea id="csv-text" rows="5" spellcheck="false">${esc(ctrl.drafts.csvText)}</textarea>
      <button data-action="ingest-csv">Ingest CSV</button>
    </div>`;
  const generate = `
    <div class="data-generate" ${mode === "generate" ? "" : "hidden"}>
      ${genColumns}
      <button data-action="add-gen-column">+ column</button>
      <p class="hint">Rows, one per line, cells separated by commas:</p>
      <textarea id="gen-rows" rows="5" spellcheck="false">${esc(ctrl.drafts.genRows)}</textarea>
      <button data-action="generate-table">Create table</button>
    </div>`;
  return `
  <details class="panel" data-panel="data" ${open ? "open" : ""}>
    <summary data-action="open-panel" data-panel="data">Select Data</summary>
    <div class="panel-body">
      <div class="mode-switch">
        <button class="${mode === "upload" ? "active" : ""}" data-action="data-mode" data-mode="upload">Upload CSV file</button>
        <button class="${mode === "generate" ? "active" : ""}" data-action="data-mode" data-mode="generate">Generate Data</button>
      </div>
      ${state.errors.data ? `<p class="error" id="data-error">${esc(state.errors.data)}</p>` : ""}
      ${state.errors.generate ? `<p class="error" id="generate-error">${esc(state.errors.generate)}</p>` : ""}
      ${state.errors.column ? `<p class="error" id="column-error">${esc(state.errors.column)}</p>` : ""}
      ${upload}
      ${generate}
      ${schemaTable(state)}
    </div>
  </details>`;
}

export function renderEditor(root: HTMLElement, state: EditorState, ctrl: EditorController): void {
  const card = state.card;
  if (!card) {
    root.innerHTML = `<p class="empty-state">Loading card&hellip;</p>`;
    return;
  }
  const missing = card.missing.length
    ? `<span class="missing" id="missing-parts">missing: ${esc(card.missing.join(", "))}</span>`
    : "";
  root.innerHTML = `
    <header class="topbar">
      <button data-action="back">&larr; Dashboard</button>
      <h1>${esc(card.name || "Untitled indicator")}</h1>
      <span class="chip ${card.status}" id="card-status">${card.status}</span>
      ${missing}
      <button class="primary" id="save-close" data-action="save-close"
              ${card.status === "complete" ? "" : "disabled"}>Save &amp; close</button>
    </header>
    ${namePanel(state, state.panel === "name")}
    ${visualizationPanel(state, state.panel === "visualization")}
    ${dataPanel(state, ctrl, state.panel === "data")}`;
}

// ---------------------------------------------------------------------------
// Event wiring (single delegated handler per event kind; survives re-renders)
// ---------------------------------------------------------------------------

function value(root: HTMLElement, selector: string): string {
  return root.querySelector<HTMLInputElement | HTMLTextAreaElement>(selector)?.value ?? "";
}

function wireEvents(root: HTMLElement, ctrl: EditorController, back: () => void): void {
  const run = (work: Promise<unknown>) => {
    work.catch((error) => {
      ctrl.store.set({ errors: { global: String(error) } });
    });
  };

  root.onclick = (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    switch (action) {
      case "back":
        back();
        break;
      case "save-close":
        ctrl.saveAndClose();
        break;
      case "open-panel": {
        event.preventDefault(); // the open state is controlled, not native
        const panel = target.dataset.panel as Panel;
        const current = ctrl.store.get().panel;
        ctrl.store.set({ panel: current === panel ? null : panel });
        break;
      }
      case "apply-name":
        run(ctrl.patchCard({
          name: value(root, "#f-name"),
          goal: value(root, "#f-goal"),
          question: value(root, "#f-question"),
        }));
        break;
      case "pick-idiom":
        run(ctrl.patchCard({ idiom: target.dataset.idiom }));
        break;
      case "data-mode":
        ctrl.store.set({ dataMode: target.dataset.mode as "upload" | "generate" });
        break;
      case "ingest-csv":
        ctrl.drafts.csvText = value(root, "#csv-text");
        run(ctrl.ingestCsv(ctrl.drafts.csvText));
        break;
      case "add-gen-column":
        ctrl.drafts.genColumns.push({ name: "", type: "categorical" });
        ctrl.store.set({});
        break;
      case "generate-table":
        ctrl.drafts.genRows = value(root, "#gen-rows");
        run(ctrl.generate(ctrl.drafts.genRows));
        break;
      case "apply-ordered": {
        const column = target.dataset.column ?? "";
        const dictionary = value(root, "#order-values")
          .split(",")
          .map((v) => v.trim())
          .filter((v) => v !== "");
        run(ctrl.setColumnType(column, "categoricalOrdered", dictionary));
        break;
      }
      default:
        break;
    }
  };

  root.onchange = (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (action === "set-task") {
      const task = (target as HTMLSelectElement).value;
      run(ctrl.patchCard({ task: task === "" ? null : task }));
    } else if (action === "bind-single") {
      const select = target as HTMLSelectElement;
      const channel = select.dataset.channel ?? "";
      run(ctrl.setBinding(channel, select.value ? [select.value] : []));
    } else if (action === "bind-multi") {
      const box = target as HTMLInputElement;
      const channel = box.dataset.channel ?? "";
      const checked = [...root.querySelectorAll<HTMLInputElement>('input[data-action="bind-multi"]')]
        .filter((el) => el.dataset.channel === channel && el.checked)
        .map((el) => el.dataset.column ?? "");
      run(ctrl.setBinding(channel, checked));
    } else if (action === "set-column-type") {
      const select = target as HTMLSelectElement;
      const column = select.dataset.column ?? "";
      const type = select.value as ColumnTypeName;
      if (type === "categoricalOrdered") {
        ctrl.store.set({ orderEditorColumn: column });
      } else {
        run(ctrl.setColumnType(column, type));
      }
    } else if (action === "csv-file") {
      const input = target as HTMLInputElement;
      const file = input.files?.[0];
      if (file) {
        run(file.text().then((text) => {
          ctrl.drafts.csvText = text;
          return ctrl.ingestCsv(text);
        }));
      }
    }
  };

  root.oninput = (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "csv-text") {
      ctrl.drafts.csvText = (target as HTMLTextAreaElement).value;
    } else if (target.id === "gen-rows") {
      ctrl.drafts.genRows = (target as HTMLTextAreaElement).value;
    } else if (target.dataset.genName !== undefined) {
      const i = Number(target.dataset.genName);
      const col = ctrl.drafts.genColumns[i];
      if (col) col.name = (target as HTMLInputElement).value;
    } else if (target.dataset.genType !== undefined) {
      const i = Number(target.dataset.genType);
      const col = ctrl.drafts.genColumns[i];
      if (col) col.type = (target as HTMLSelectElement).value as ColumnTypeName;
    }
  };
}

export async function mountEditor(
  root: HTMLElement,
  cardId: string,
  done: () => void,
  isCurrent: () => boolean = () => true,
): Promise<EditorController> {
  const ctrl = new EditorController(done);
  ctrl.store.subscribe(() => {
    if (isCurrent()) renderEditor(root, ctrl.store.get(), ctrl);
  });
  wireEvents(root, ctrl, done);
  renderEditor(root, ctrl.store.get(), ctrl);
  await ctrl.load(cardId);
  return ctrl;
}
