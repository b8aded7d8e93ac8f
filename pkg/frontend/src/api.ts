// Thin typed client over the HTTP JSON API. The UI's only configuration is
// the API base URL; everything it displays originates from these calls.

import type {
  ApiErrorBody,
  BindingMap,
  CardDoc,
  CardSummary,
  ChartSpecDoc,
  ColumnTypeName,
  DatasetDoc,
  IdiomEntry,
  Recommendation,
  TaskEntry,
} from "./types.js";

let baseUrl = "";

export function configureApi(url: string): void {
  baseUrl = url.replace(/\/+$/, "");
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details?: unknown,
  ) {
    super(message);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(`${baseUrl}${path}`, init);
  if (response.status === 204) {
    return undefined as T;
  }
  if (!response.ok) {
    let body: ApiErrorBody | null = null;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      // non-JSON error body; fall through
    }
    throw new ApiError(
      response.status,
      body?.code ?? "httpError",
      body?.message ?? `${response.status} ${response.statusText}`,
      body?.details,
    );
  }
  return (await response.json()) as T;
}

function jsonInit(method: string, payload: unknown): RequestInit {
  return {
    method,
    headers: { "content-type": "application/json" },
    body: JSON.stringify(payload),
  };
}

export const api = {
  tasks: () => request<TaskEntry[]>("/api/tasks"),
  idioms: () => request<IdiomEntry[]>("/api/idioms"),

  uploadCsv: (csvText: string) =>
    request<DatasetDoc>("/api/datasets", {
      method: "POST",
      headers: { "content-type": "text/csv" },
      body: csvText,
    }),

  generateTable: (
    columns: { name: string; type: ColumnTypeName; orderDictionary?: string[] }[],
    rows: string[][],
  ) => request<DatasetDoc>("/api/datasets", jsonInit("POST", { columns, rows })),

  dataset: (datasetId: string) => request<DatasetDoc>(`/api/datasets/${datasetId}`),

  setColumnType: (
    datasetId: string,
    column: string,
    type: ColumnTypeName,
    orderDictionary?: string[],
  ) =>
    request<DatasetDoc>(
      `/api/datasets/${datasetId}/columns/${encodeURIComponent(column)}`,
      jsonInit("PATCH", orderDictionary ? { type, orderDictionary } : { type }),
    ),

  recommendations: (input: { task?: string | null; datasetId?: string | null }) =>
    request<Recommendation[]>("/api/recommendations", jsonInit("POST", {
      task: input.task ?? null,
      datasetId: input.datasetId ?? null,
    })),

  preview: (req: { idiom: string; datasetId: string; bindings: BindingMap; title?: string }) =>
    request<ChartSpecDoc>("/api/preview", jsonInit("POST", req)),

  createCard: (name: string) => request<CardDoc>("/api/indicators", jsonInit("POST", { name })),
  listCards: () => request<CardSummary[]>("/api/indicators"),
  card: (id: string) => request<CardDoc>(`/api/indicators/${id}`),
  patchCard: (id: string, patch: Record<string, unknown>) =>
    request<CardDoc>(`/api/indicators/${id}`, jsonInit("PATCH", patch)),
  deleteCard: (id: string) => request<void>(`/api/indicators/${id}`, { method: "DELETE" }),
};

export type Api = typeof api;
