// Dashboard: the user's indicator cards as tiles, newest first, plus the
// Create Indicator entry point.

import { api } from "../api.js";
import { escapeHtml as esc } from "../chart.js";
import { illustration } from "../illustrations.js";
import type { CardDoc, CardSummary, IdiomEntry } from "../types.js";

export interface DashboardDeps {
  openCard(id: string): void;
}

function tile(summary: CardSummary, card: CardDoc | null, idioms: IdiomEntry[]): string {
  const idiomEntry = idioms.find((i) => i.idiom === summary.idiom);
  const statusChip = card
    ? `<span class="chip ${card.status}">${card.status}</span>`
    : "";
  return `
    <article class="tile" data-action="open-card" data-id="${esc(summary.id)}">
      <div class="tile-glyph">${idiomEntry ? illustration(idiomEntry.illustrationRef) : illustration("")}</div>
      <h3>${esc(summary.name || "Untitled indicator")}</h3>
      <p class="tile-meta">${idiomEntry ? esc(idiomEntry.label) : "No idiom yet"} ${statusChip}</p>
      <p class="tile-meta">updated ${esc(summary.updatedAt)}</p>
      <button class="tile-delete" data-action="delete-card" data-id="${esc(summary.id)}" title="Delete">&times;</button>
    </article>`;
}

export async function renderDashboard(
  root: HTMLElement,
  deps: DashboardDeps,
  isCurrent: () => boolean = () => true,
): Promise<void> {
  const [summaries, idioms] = await Promise.all([api.listCards(), api.idioms()]);
  const cards = await Promise.all(
    summaries.map((s) => api.card(s.id).catch(() => null)),
  );
  if (!isCurrent()) return; // another route took over while we were loading

  const tiles = summaries.length
    ? summaries.map((s, i) => tile(s, cards[i] ?? null, idioms)).join("")
    : `<p class="empty-state">No indicators yet. Click <strong>Create Indicator</strong> to design your first one.</p>`;

  root.innerHTML = `
    <header class="topbar">
      <h1>Indicator cards</h1>
      <button class="primary" data-action="create-card">Create Indicator</button>
    </header>
    <section class="tile-grid" id="card-tiles">${tiles}</section>`;

  root.onclick = async (event) => {
    const target = (event.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    const action = target.dataset.action;
    if (action === "create-card") {
      const card = await api.createCard("");
      deps.openCard(card.id);
    } else if (action === "delete-card") {
      event.stopPropagation();
      await api.deleteCard(target.dataset.id ?? "");
      await renderDashboard(root, deps, isCurrent);
    } else if (action === "open-card") {
      deps.openCard(target.dataset.id ?? "");
    }
  };
}
