/** Scripted stand-in for the explanation service, driven through the
 * client's injectable fetch.  Holds canned payloads shaped like the
 * real API and records every request for assertions. */

import {
  AnswerPayload,
  ExplanationPayload,
  FixtureInfo,
  LevelInfo,
  Mode,
  RunPayload,
  ServiceErrorBody,
} from "../src/types.js";
import { FetchLike } from "../src/api.js";

export function jsonResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as unknown as Response;
}

export function brokenResponse(status: number): Response {
  return {
    ok: false,
    status,
    json: async () => {
      throw new Error("not json");
    },
  } as unknown as Response;
}

export const TAU_ID = "mini_mas.q7:0";
export const UPENN_ID = "mini_mas.q7:1";

export const TAU_LEVELS: LevelInfo[] = [
  { word_id: 2, word: "authors" },
  { word_id: 3, word: "papers" },
  { word_id: 4, word: "conferences" },
  { word_id: 5, word: "2005" },
];

function answerPayload(
  id: string,
  index: number,
  text: string,
  assignments: number,
): AnswerPayload {
  return {
    id,
    index,
    answer: [text],
    answer_text: text,
    assignments,
    polynomial: `${text} polynomial`,
    single: `single for ${text}`,
    factorized: {
      canonical: `canonical for ${text}`,
      pretty: `pretty for ${text}`,
    },
    metrics: {
      factorized_length: 15,
      factorized_readability: 2,
      identity_length: 25,
      identity_readability: 5,
      compatible: true,
    },
    levels: TAU_LEVELS,
  };
}

function runPayload(
  runId: string,
  question: string,
  answers: AnswerPayload[],
): RunPayload {
  const [fixture, query] = runId.split(".");
  return {
    run_id: runId,
    fixture,
    query,
    question,
    answers,
    timings: { evaluate_s: 0, factorize_s: 0, sentences_s: 0, total_s: 0 },
  };
}

export interface RecordedCall {
  method: string;
  url: string;
  body?: unknown;
}

export class FakeService {
  fixtures: FixtureInfo[] = [
    {
      name: "mini_mas",
      queries: [
        { name: "q7", question: "Return the organization of authors" },
        { name: "q_empty", question: "Return nothing at all" },
      ],
      relations: [{ name: "org", rows: 2 }],
    },
    {
      name: "union_small",
      queries: [{ name: "u1", question: "Return organizations of authors" }],
      relations: [{ name: "pub", rows: 4 }],
    },
  ];

  runs = new Map<string, RunPayload>([
    [
      "mini_mas|q7",
      runPayload("mini_mas.q7", "Return the organization of authors", [
        answerPayload(TAU_ID, 0, "TAU", 5),
        answerPayload(UPENN_ID, 1, "UPENN", 1),
      ]),
    ],
    ["mini_mas|q_empty", runPayload("mini_mas.q_empty", "Return nothing at all", [])],
    [
      "union_small|u1",
      runPayload("union_small.u1", "Return organizations of authors", [
        answerPayload("union_small.u1:0", 0, "TAU", 2),
      ]),
    ],
  ]);

  explanations = new Map<string, ExplanationPayload>();

  /** Consumed by the next POST /queries, then cleared. */
  submitFailure: { status: number; body: ServiceErrorBody } | null = null;

  calls: RecordedCall[] = [];

  private holding = false;
  private gates: (() => void)[] = [];

  constructor() {
    for (const [id, name] of [
      [TAU_ID, "TAU"],
      [UPENN_ID, "UPENN"],
    ] as const) {
      this.setExplanation(id, "single", undefined, {
        mode: "single",
        answer: name,
        answer_id: id,
        levels: TAU_LEVELS,
        text: `single for ${name}`,
        pretty: `single for ${name}`,
      });
      this.setExplanation(id, "factorized", undefined, {
        mode: "factorized",
        answer: name,
        answer_id: id,
        levels: TAU_LEVELS,
        text: `canonical for ${name}`,
        pretty: `${name} is the organization of\n  someone who published\n    a paper.`,
      });
      for (const level of TAU_LEVELS) {
        this.setExplanation(id, "summarized", String(level.word_id), {
          mode: "summarized",
          answer: name,
          answer_id: id,
          levels: TAU_LEVELS,
          level,
          text: `summary for ${name} over ${level.word}`,
          pretty: `summary for ${name} over ${level.word}`,
        });
      }
    }
  }

  setExplanation(
    answerId: string,
    mode: Mode,
    level: string | undefined,
    payload: ExplanationPayload,
  ): void {
    this.explanations.set(`${answerId}|${mode}|${level ?? ""}`, payload);
  }

  /** Make requests park until release() is called. */
  hold(): void {
    this.holding = true;
  }

  release(): void {
    this.holding = false;
    const gates = [...this.gates];
    this.gates = [];
    for (const gate of gates) {
      gate();
    }
  }

  callsTo(fragment: string): RecordedCall[] {
    return this.calls.filter((call) => call.url.includes(fragment));
  }

  readonly fetch: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string"
      ? JSON.parse(init.body)
      : undefined;
    this.calls.push({ method, url, body });
    if (this.holding) {
      await new Promise<void>((resolve) => this.gates.push(resolve));
    }
    return this.route(method, new URL(url), body);
  };

  private route(method: string, url: URL, body?: unknown): Response {
    if (method === "GET" && url.pathname === "/fixtures") {
      return jsonResponse(200, this.fixtures);
    }
    if (method === "POST" && url.pathname === "/queries") {
      if (this.submitFailure !== null) {
        const failure = this.submitFailure;
        this.submitFailure = null;
        return jsonResponse(failure.status, failure.body);
      }
      const query = body as { fixture?: string; query?: string; inline?: unknown };
      if (query.inline !== undefined) {
        return jsonResponse(200, this.runs.get("mini_mas|q7"));
      }
      const run = this.runs.get(`${query.fixture}|${query.query}`);
      if (run === undefined) {
        return jsonResponse(404, {
          code: "LOOKUP_FAILED",
          message: `unknown fixture query ${query.fixture}/${query.query}`,
          stage: "load",
        });
      }
      return jsonResponse(200, run);
    }
    const match = url.pathname.match(/^\/answers\/(.+)\/explanation$/);
    if (method === "GET" && match !== null) {
      const answerId = decodeURIComponent(match[1]);
      const mode = url.searchParams.get("mode") ?? "";
      const level = url.searchParams.get("level") ?? "";
      const payload = this.explanations.get(`${answerId}|${mode}|${level}`);
      if (payload === undefined) {
        return jsonResponse(404, {
          code: "LOOKUP_FAILED",
          message: `no explanation for ${answerId} ${mode} ${level}`,
          stage: "explanation",
        });
      }
      return jsonResponse(200, payload);
    }
    return jsonResponse(404, {
      code: "LOOKUP_FAILED",
      message: `no route ${method} ${url.pathname}`,
      stage: "pipeline",
    });
  }
}
