// End-to-end design flows driven through the real DOM against a live
// backend: the task-driven order (task -> idiom -> data) and both
// data-driven orders (data -> idiom; data -> task -> idiom). Each flow must
// end with a complete card visible on the dashboard, a thumbs-up-badged
// idiom grid along the way, and a rendered SVG preview.

import { afterAll, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { initApp, type App } from "../src/main.js";
import { startBackend, type Backend } from "./server.js";

const CSV = "Exercises,Class Average Points,My Points\nEx1,7.5,9\nEx2,6,4\nEx3,8,10";

let backend: Backend;
let root: HTMLElement;
let app: App;

beforeAll(async () => {
  backend = await startBackend();
});

afterAll(async () => {
  await backend.stop();
});

beforeEach(async () => {
  document.body.innerHTML = `<div id="root"></div>`;
  root = document.getElementById("root") as HTMLElement;
  window.location.hash = "";
  app = initApp(root, { apiBase: backend.baseUrl });
  await waitFor(() => root.querySelector("[data-action=create-card]"));
});

async function waitFor<T>(probe: () => T | null | undefined | false, timeoutMs = 20_000): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting; current DOM:\n${root.innerHTML.slice(0, 2000)}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 40));
  }
}

function click(selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`no element ${selector}`);
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

function setInput(selector: string, value: string): void {
  const el = root.querySelector<HTMLInputElement | HTMLTextAreaElement>(selector);
  if (!el) throw new Error(`no input ${selector}`);
  el.value = value;
  el.dispatchEvent(new Event("input", { bubbles: true }));
}

function choose(selector: string, value: string): void {
  const el = root.querySelector<HTMLSelectElement>(selector);
  if (!el) throw new Error(`no select ${selector}`);
  el.value = value;
  el.dispatchEvent(new Event("change", { bubbles: true }));
}

async function createCardViaUi(): Promise<string> {
  click("[data-action=create-card]");
  await waitFor(() => root.querySelector("#card-status"));
  return window.location.hash.replace("#/cards/", "");
}

async function nameCard(name: string): Promise<void> {
  click("summary[data-panel=name]");
  await waitFor(() => root.querySelector("#f-name"));
  setInput("#f-name", name);
  click("[data-action=apply-name]");
  await waitFor(() => root.querySelector("h1")?.textContent === name);
}

async function ingestCsvViaUi(): Promise<void> {
  click("summary[data-panel=data]");
  await waitFor(() => root.querySelector("#csv-text"));
  setInput("#csv-text", CSV);
  click("[data-action=ingest-csv]");
  // Schema preview: first header row = types, second = names.
  await waitFor(() => root.querySelector("#schema-preview"));
  const typeRow = [...root.querySelectorAll<HTMLSelectElement>(
    "#schema-preview thead tr:first-child select",
  )].map((s) => s.value);
  expect(typeRow).toEqual(["categorical", "numerical", "numerical"]);
  const nameRow = [...root.querySelectorAll("#schema-preview thead tr:last-child th")]
    .map((th) => th.textContent);
  expect(nameRow).toEqual(["Exercises", "Class Average Points", "My Points"]);
}

async function bindScenarioColumns(): Promise<void> {
  // Wait for the bar idiom's channel controls (its x channel admits the
  // categorical column); a previously selected idiom's controls may still
  // be on screen for a moment.
  await waitFor(() => {
    const select = root.querySelector('select[data-action=bind-single][data-channel=x]');
    return select?.querySelector('option[value="Exercises"]') ? select : null;
  });
  choose('select[data-action=bind-single][data-channel=x]', "Exercises");
  await waitFor(() => {
    const boxes = root.querySelectorAll('input[data-action=bind-multi][data-channel=y]');
    return boxes.length === 2 ? boxes : null;
  });
  for (const column of ["Class Average Points", "My Points"]) {
    const box = await waitFor(() =>
      [...root.querySelectorAll<HTMLInputElement>('input[data-action=bind-multi][data-channel=y]')]
        .find((el) => el.dataset.column === column && !el.checked));
    box.checked = true;
    box.dispatchEvent(new Event("change", { bubbles: true }));
    await waitFor(() =>
      [...root.querySelectorAll<HTMLInputElement>('input[data-action=bind-multi][data-channel=y]')]
        .find((el) => el.dataset.column === column)?.checked);
  }
}

async function expectCompleteAndSave(cardId: string): Promise<void> {
  // Rendered preview with both series as bars (3 categories x 2 series).
  // An intermediate preview with one bound series may render first.
  const preview = await waitFor(() => {
    const svg = root.querySelector("#chart-preview svg");
    return svg && svg.outerHTML.split('class="bar"').length - 1 === 6 ? svg : null;
  });
  expect(preview).not.toBeNull();

  await waitFor(() => root.querySelector("#card-status")?.textContent === "complete");
  const save = root.querySelector<HTMLButtonElement>("#save-close");
  expect(save?.disabled).toBe(false);

  click("#save-close");
  const tile = await waitFor(() =>
    root.querySelector(`.tile[data-id="${cardId}"]`));
  expect(tile.querySelector(".chip.complete")).not.toBeNull();
}

describe("dashboard", () => {
  it("shows the empty-state prompt before any card exists", async () => {
    // Runs first: the backend store starts empty.
    expect(root.querySelector(".empty-state")).not.toBeNull();
  });
});

describe("design flows", () => {
  it("task-driven: task -> idiom -> data reaches a complete card", async () => {
    const cardId = await createCardViaUi();
    await nameCard("Exercise performance");

    // Task first: badges appear from the task route alone.
    click("summary[data-panel=visualization]");
    await waitFor(() => root.querySelector("#task-select"));
    choose("#task-select", "comparison");
    const badged = await waitFor(() => {
      const cells = root.querySelectorAll(".idiom-cell.recommended");
      return cells.length > 0 ? cells : null;
    });
    expect([...badged].some((c) => (c as HTMLElement).dataset.idiom === "bar")).toBe(true);
    // Badges carry API-provided reasons, not client-made text.
    expect((badged[0] as HTMLElement).title.length).toBeGreaterThan(0);

    click('[data-action=pick-idiom][data-idiom="bar"]');
    await waitFor(() => root.querySelector(".idiom-cell.selected"));

    await ingestCsvViaUi();

    click("summary[data-panel=visualization]");
    await bindScenarioColumns();
    await expectCompleteAndSave(cardId);
  });

  it("data-driven: data -> idiom (no task) reaches a complete card", async () => {
    const cardId = await createCardViaUi();
    await nameCard("Data first");

    await ingestCsvViaUi();

    click("summary[data-panel=visualization]");
    // Badges driven purely by the data signature.
    await waitFor(() => {
      const bar = root.querySelector('.idiom-cell[data-idiom="bar"]');
      return bar?.classList.contains("recommended") ? bar : null;
    });
    const taskSelect = root.querySelector<HTMLSelectElement>("#task-select");
    expect(taskSelect?.value).toBe("");

    click('[data-action=pick-idiom][data-idiom="bar"]');
    await bindScenarioColumns();
    await expectCompleteAndSave(cardId);
  });

  it("data-driven: data -> task -> idiom, with combined annotations", async () => {
    const cardId = await createCardViaUi();
    await nameCard("Data then task");

    await ingestCsvViaUi();

    click("summary[data-panel=visualization]");
    await waitFor(() => root.querySelector("#task-select"));
    choose("#task-select", "comparison");

    // Combined mode: radar suits the task but not this table -> half badge.
    await waitFor(() => {
      const radar = root.querySelector('.idiom-cell[data-idiom="radar"]');
      return radar?.classList.contains("partiallyCompatible") ? radar : null;
    });
    const bar = await waitFor(() => {
      const cell = root.querySelector('.idiom-cell[data-idiom="bar"]');
      return cell?.classList.contains("recommended") ? cell : null;
    });
    expect(bar).not.toBeNull();

    // A not-recommended idiom stays selectable and is flagged informationally.
    click('[data-action=pick-idiom][data-idiom="bubble"]');
    await waitFor(() => root.querySelector(".notice"));

    click('[data-action=pick-idiom][data-idiom="bar"]');
    await bindScenarioColumns();
    await expectCompleteAndSave(cardId);
  });
});

describe("inline validation surfaces", () => {
  it("flags a ragged generated row before submit", async () => {
    await createCardViaUi();
    click("summary[data-panel=data]");
    await waitFor(() => root.querySelector("[data-action=data-mode][data-mode=generate]"));
    click("[data-action=data-mode][data-mode=generate]");
    await waitFor(() => root.querySelector("#gen-rows"));

    setInput("[data-gen-name='0']", "Week");
    setInput("[data-gen-name='1']", "Points");
    setInput("#gen-rows", "Week 1,5\nWeek 2");
    click("[data-action=generate-table]");

    const error = await waitFor(() => root.querySelector("#generate-error"));
    expect(error.textContent).toContain("Row 2");
    expect(root.querySelector("#schema-preview")).toBeNull();
  });

  it("shows 422 details inline when a type override does not fit", async () => {
    await createCardViaUi();
    await ingestCsvViaUi();

    choose('select[data-action=set-column-type][data-column="Exercises"]', "numerical");
    const error = await waitFor(() => root.querySelector("#column-error"));
    expect(error.textContent).toContain("Ex1");
  });

  it("binding a wrong-typed column surfaces API violations verbatim", async () => {
    await createCardViaUi();
    await ingestCsvViaUi();
    click("summary[data-panel=visualization]");
    await waitFor(() => root.querySelector("#task-select"));
    click('[data-action=pick-idiom][data-idiom="heatmap"]');

    // Heatmap needs two category columns; this table has one. Bind what
    // exists and let the server explain what is wrong.
    await waitFor(() => root.querySelector('select[data-action=bind-single][data-channel=row]'));
    choose('select[data-action=bind-single][data-channel=row]', "Exercises");
    await waitFor(() => root.querySelector('select[data-action=bind-single][data-channel=value]'));
    choose('select[data-action=bind-single][data-channel=value]', "My Points");

    const violations = await waitFor(() => root.querySelector(".violations"));
    expect(violations.textContent).toContain("column");
  });
});
