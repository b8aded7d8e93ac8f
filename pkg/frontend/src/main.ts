// App bootstrap and hash router. Routes: "#/" dashboard, "#/cards/<id>" editor.
// Every screen is reconstructible from the API alone, so a refresh on any
// route is safe.

import { configureApi } from "./api.js";
import { renderDashboard } from "./views/dashboard.js";
import { mountEditor } from "./views/editor.js";

export interface App {
  root: HTMLElement;
  navigate(hash: string): Promise<void>;
}

export function initApp(root: HTMLElement, options: { apiBase?: string } = {}): App {
  const globalBase = (globalThis as { ISCARD_API_BASE?: string }).ISCARD_API_BASE;
  configureApi(options.apiBase ?? globalBase ?? "");

  // Two guards against double-mounting and stale writes: a programmatic
  // navigate() renders immediately, so the hashchange echo that follows is
  // a no-op; and each render carries a token so a slow, superseded render
  // can never write over the root after a newer route took it.
  let renderedHash: string | null = null;
  let routeToken = 0;

  async function render(hash: string): Promise<void> {
    if (renderedHash === hash) return;
    renderedHash = hash;
    const token = ++routeToken;
    const isCurrent = () => token === routeToken;
    const cardMatch = /^#\/cards\/([A-Za-z0-9_-]+)$/.exec(hash);
    if (cardMatch) {
      await mountEditor(root, cardMatch[1] as string, () => {
        void navigate("#/");
      }, isCurrent);
      return;
    }
    await renderDashboard(root, {
      openCard: (id) => {
        void navigate(`#/cards/${id}`);
      },
    }, isCurrent);
  }

  async function navigate(hash: string): Promise<void> {
    if (window.location.hash !== hash) {
      window.location.hash = hash;
    }
    await render(hash);
  }

  window.addEventListener("hashchange", () => {
    render(window.location.hash).catch((error) => {
      console.error("route render failed", error);
    });
  });

  render(window.location.hash || "#/").catch((error) => {
    console.error("initial render failed", error);
  });
  return { root, navigate };
}

// Browser entry point; tests import initApp and mount their own root.
const appRoot = typeof document !== "undefined" ? document.getElementById("app") : null;
if (appRoot) {
  initApp(appRoot);
}
