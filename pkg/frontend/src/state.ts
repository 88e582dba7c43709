/** Session state that survives a page reload.
 *
 * The pieces worth sharing (fixture, query, expanded answer, mode,
 * level) round-trip through the URL's query string; everything else is
 * rebuilt from the service on load.  Per-answer panel settings live in
 * a store so toggling between answers or modes never loses a choice.
 */

import { Mode, MODES } from "./types.js";

export interface SessionParams {
  fixture: string | null;
  query: string | null;
  answer: string | null;
  mode: Mode | null;
  level: string | null;
}

export const EMPTY_PARAMS: SessionParams = {
  fixture: null,
  query: null,
  answer: null,
  mode: null,
  level: null,
};

const PARAM_KEYS: (keyof SessionParams)[] = [
  "fixture",
  "query",
  "answer",
  "mode",
  "level",
];

/** Write the session fields into an existing query string, leaving
 * unrelated parameters (such as the service address) untouched. */
export function applyParams(search: string, state: SessionParams): string {
  const params = new URLSearchParams(search);
  for (const key of PARAM_KEYS) {
    const value = state[key];
    if (value === null) {
      params.delete(key);
    } else {
      params.set(key, value);
    }
  }
  return params.toString();
}

export function parseParams(search: string): SessionParams {
  const params = new URLSearchParams(search);
  const mode = params.get("mode");
  return {
    fixture: params.get("fixture"),
    query: params.get("query"),
    answer: params.get("answer"),
    mode: mode !== null && (MODES as string[]).includes(mode)
      ? (mode as Mode)
      : null,
    level: params.get("level"),
  };
}

export interface PanelState {
  mode: Mode;
  level: string | null;
}

export const DEFAULT_MODE: Mode = "single";

/** Remembers each answer's last mode and summarization level. */
export class PanelStore {
  private readonly panels = new Map<string, PanelState>();

  get(answerId: string): PanelState {
    let panel = this.panels.get(answerId);
    if (panel === undefined) {
      panel = { mode: DEFAULT_MODE, level: null };
      this.panels.set(answerId, panel);
    }
    return panel;
  }

  setMode(answerId: string, mode: Mode): PanelState {
    const panel = this.get(answerId);
    panel.mode = mode;
    return panel;
  }

  setLevel(answerId: string, level: string | null): PanelState {
    const panel = this.get(answerId);
    panel.level = level;
    return panel;
  }

  clear(): void {
    this.panels.clear();
  }
}
