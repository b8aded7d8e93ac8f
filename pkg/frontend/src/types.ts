// Wire types mirroring the backend JSON API (camelCase throughout).

export type ColumnTypeName = "categorical" | "categoricalOrdered" | "numerical";

export type RecommendationLevel = "recommended" | "partiallyCompatible" | "notRecommended";

export interface TaskEntry {
  task: string;
  label: string;
  description: string;
  illustrationRef: string;
}

export interface ChannelRequirement {
  name: string;
  minColumns: number;
  maxColumns: number | null; // null = unbounded
  admissibleTypes: ColumnTypeName[];
  required: boolean;
}

export interface IdiomEntry {
  idiom: string;
  label: string;
  illustrationRef: string;
  channels: ChannelRequirement[];
}

export interface Recommendation {
  idiom: string;
  level: RecommendationLevel;
  reasons: string[];
}

export interface ColumnSchema {
  name: string;
  type: ColumnTypeName;
  inferred: boolean;
  orderDictionary?: string[];
}

export interface SchemaDoc {
  columns: ColumnSchema[];
  rowCount: number;
  warnings: string[];
}

export interface DatasetDoc {
  datasetId: string;
  schema: SchemaDoc;
  rows?: string[][];
}

export type BindingMap = Record<string, string[]>;

export interface CardDoc {
  id: string;
  name: string;
  goal: string;
  question: string;
  task: string | null;
  datasetId: string | null;
  idiom: string | null;
  bindings: BindingMap | null;
  status: "draft" | "complete";
  createdAt: string;
  updatedAt: string;
  missing: string[];
}

export interface CardSummary {
  id: string;
  name: string;
  idiom: string | null;
  updatedAt: string;
}

export interface AxisDoc {
  label: string;
  valueKind: string;
}

export type PointValue = number | string;
export type Point = number | null | PointValue[];

export interface SeriesDoc {
  name: string;
  points: Point[];
}

export interface SliceDoc {
  label: string;
  value: number;
}

export interface ChartSpecDoc {
  specVersion: number;
  idiom: string;
  title: string;
  xAxis: AxisDoc;
  yAxis: AxisDoc;
  categories: string[];
  series: SeriesDoc[];
  slices: SliceDoc[];
  notes: string[];
}

export interface Violation {
  channel: string;
  rule: string;
  column: string | null;
  message: string;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: unknown;
}
