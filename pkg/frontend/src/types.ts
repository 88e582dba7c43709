/** Payload shapes of the explanation service's JSON API. */

export type Mode = "single" | "factorized" | "summarized";

export const MODES: Mode[] = ["single", "factorized", "summarized"];

export interface LevelInfo {
  word_id: number;
  word: string;
}

export interface FixtureQueryInfo {
  name: string;
  question: string;
}

export interface RelationInfo {
  name: string;
  rows: number;
}

export interface FixtureInfo {
  name: string;
  queries: FixtureQueryInfo[];
  relations: RelationInfo[];
}

export interface AnswerMetrics {
  factorized_length: number;
  factorized_readability: number;
  identity_length: number;
  identity_readability: number;
  compatible: boolean;
}

export interface AnswerPayload {
  id: string;
  index: number;
  answer: string[];
  answer_text: string;
  assignments: number;
  polynomial: string;
  single: string;
  factorized: { canonical: string; pretty: string };
  metrics: AnswerMetrics;
  levels: LevelInfo[];
}

export interface RunPayload {
  run_id: string;
  fixture: string;
  query: string;
  question: string;
  answers: AnswerPayload[];
  timings: Record<string, number>;
}

export interface ExplanationPayload {
  mode: Mode;
  answer: string;
  answer_id: string;
  levels: LevelInfo[];
  text: string;
  pretty: string;
  level?: LevelInfo;
}

/** Self-contained upload: schema and tables as text, the question tree in
 * tabular form, a datalog query, and optionally an explicit mapping. */
export interface InlineSpec {
  schema_text: string;
  tables: Record<string, string>;
  tree: string;
  query: string;
  question?: string;
  mapping?: unknown[];
  beta?: number;
}

export type QueryBody = { fixture: string; query: string } | { inline: InlineSpec };

export interface ServiceErrorBody {
  code: string;
  message: string;
  stage: string;
}
