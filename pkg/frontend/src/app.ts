/** Single-page explorer for the explanation service.
 *
 * The page has three regions: a query form (packaged fixture picker or
 * a custom upload), a stage-tagged error banner, and the answer list.
 * Each answer row expands into a panel with a mode switch (single,
 * factorized, summarized) and, in summarized mode, a level slider
 * labeled with the question's own words.  Every sentence shown is the
 * service's string verbatim; the client only decides what to request.
 */

import { ServiceClient, ServiceError } from "./api.js";
import {
  DEFAULT_MODE,
  EMPTY_PARAMS,
  PanelStore,
  SessionParams,
  applyParams,
  parseParams,
} from "./state.js";
import {
  AnswerPayload,
  FixtureInfo,
  InlineSpec,
  Mode,
  MODES,
  QueryBody,
  RunPayload,
} from "./types.js";

const STAGE_LABELS: Record<string, string> = {
  parse: "parse",
  mapping: "mapping",
  load: "load",
  run: "evaluation",
  explanation: "explanation",
  network: "network",
  form: "form",
  pipeline: "service",
};

type RunSource =
  | { kind: "fixture"; fixture: string; query: string }
  | { kind: "inline" };

interface PanelElements {
  toggle: HTMLButtonElement;
  panel: HTMLElement;
  modeButtons: HTMLButtonElement[];
  levelBox: HTMLElement;
  slider: HTMLInputElement;
  levelWord: HTMLElement;
  levelLabels: HTMLElement;
  sentence: HTMLPreElement;
}

function make<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

const DEMO_SCHEMA =
  'org(oid:number, oname:string:affiliation:"organization|organizations")\n' +
  'author(aid:number, aname:string:person:"author|authors", oid:number)\n';

const DEMO_TABLES = JSON.stringify(
  {
    org: "oid,oname\n1,TAU\n2,UPENN\n",
    author: "aid,aname,oid\n1,Tova M.,1\n2,Susan D.,2\n",
  },
  null,
  2,
);

const DEMO_TREE =
  "1 Return VB 0 root\n" +
  "2 the DT 3 det\n" +
  "3 organization NN 1 dobj\n" +
  "4 of IN 3 prep\n" +
  "5 authors NNS 4 pobj\n";

const DEMO_QUERY = "q(oname) :- org(oid, oname), author(aid, aname, oid)";

const DEMO_QUESTION = "Return the organization of authors";

export class ExplorerApp {
  private readonly root: HTMLElement;
  private readonly client: ServiceClient;
  private readonly win: Window;
  private readonly panels = new PanelStore();

  private fixtures: FixtureInfo[] = [];
  private run: RunPayload | null = null;
  private source: RunSource | null = null;
  private openAnswer: string | null = null;

  private readonly panelEls = new Map<string, PanelElements>();
  private readonly sentenceTokens = new Map<string, number>();
  private readonly tasks = new Set<Promise<void>>();

  private sourceKind: "fixture" | "custom" = "fixture";

  // form controls, bound in buildSkeleton
  private fixtureSelect!: HTMLSelectElement;
  private querySelect!: HTMLSelectElement;
  private questionPreview!: HTMLElement;
  private fixtureFields!: HTMLFieldSetElement;
  private customFields!: HTMLFieldSetElement;
  private schemaInput!: HTMLTextAreaElement;
  private tablesInput!: HTMLTextAreaElement;
  private treeInput!: HTMLTextAreaElement;
  private queryInput!: HTMLTextAreaElement;
  private questionInput!: HTMLInputElement;
  private mappingInput!: HTMLTextAreaElement;
  private betaInput!: HTMLInputElement;
  private banner!: HTMLElement;
  private results!: HTMLElement;
  private runQuestion!: HTMLElement;
  private answerList!: HTMLUListElement;
  private noAnswers!: HTMLElement;

  constructor(root: HTMLElement, client: ServiceClient, win?: Window) {
    this.root = root;
    this.client = client;
    this.win = win ?? window;
  }

  start(): Promise<void> {
    return this.track(this.doStart());
  }

  /** Resolves once every in-flight request has settled and the DOM is
   * up to date.  Interactions may queue further work, so loop. */
  async settled(): Promise<void> {
    while (this.tasks.size > 0) {
      await Promise.all([...this.tasks]);
    }
  }

  private track(work: Promise<void>): Promise<void> {
    const wrapped = work.catch((err) => this.showError(err));
    this.tasks.add(wrapped);
    void wrapped.finally(() => this.tasks.delete(wrapped));
    return wrapped;
  }

  private async doStart(): Promise<void> {
    this.buildSkeleton();
    try {
      this.fixtures = await this.client.fixtures();
    } catch (err) {
      this.fixtures = [];
      this.showError(err);
    }
    this.populateFixtureSelect();
    this.win.addEventListener("popstate", () => {
      void this.track(this.restoreFromUrl());
    });
    await this.restoreFromUrl();
  }

  // ---------------------------------------------------------------- form

  private buildSkeleton(): void {
    this.root.textContent = "";
    this.root.appendChild(make("h1", "title", "answer explorer"));

    const form = make("form", "query-form");
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      if (this.sourceKind === "fixture") {
        void this.submitFixture(
          this.fixtureSelect.value,
          this.querySelect.value,
        );
      } else {
        void this.submitCustom();
      }
    });

    const tabs = make("div", "source-tabs");
    const fixtureTab = make("button", "tab", "packaged fixture");
    fixtureTab.type = "button";
    fixtureTab.dataset.source = "fixture";
    const customTab = make("button", "tab", "custom upload");
    customTab.type = "button";
    customTab.dataset.source = "custom";
    fixtureTab.addEventListener("click", () => this.setSource("fixture"));
    customTab.addEventListener("click", () => this.setSource("custom"));
    tabs.append(fixtureTab, customTab);
    form.appendChild(tabs);

    this.fixtureFields = make("fieldset", "fixture-fields");
    const fixtureLabel = make("label", undefined, "fixture ");
    this.fixtureSelect = make("select", "fixture-select");
    this.fixtureSelect.addEventListener("change", () => {
      this.populateQuerySelect();
    });
    fixtureLabel.appendChild(this.fixtureSelect);
    const queryLabel = make("label", undefined, "question ");
    this.querySelect = make("select", "query-select");
    this.querySelect.addEventListener("change", () => {
      this.updateQuestionPreview();
    });
    queryLabel.appendChild(this.querySelect);
    this.questionPreview = make("p", "question-preview");
    this.fixtureFields.append(fixtureLabel, queryLabel, this.questionPreview);
    form.appendChild(this.fixtureFields);

    this.customFields = make("fieldset", "custom-fields");
    this.customFields.hidden = true;
    this.schemaInput = this.addTextarea("schema-input", "schema", DEMO_SCHEMA);
    this.tablesInput = this.addTextarea(
      "tables-input",
      "tables (JSON: relation name to CSV text)",
      DEMO_TABLES,
    );
    this.treeInput = this.addTextarea(
      "tree-input",
      "question tree (id word pos parent rel)",
      DEMO_TREE,
    );
    this.queryInput = this.addTextarea("query-input", "query", DEMO_QUERY);
    const questionLabel = make("label", undefined, "question text ");
    this.questionInput = make("input", "question-input");
    this.questionInput.type = "text";
    this.questionInput.value = DEMO_QUESTION;
    questionLabel.appendChild(this.questionInput);
    this.customFields.appendChild(questionLabel);
    this.mappingInput = this.addTextarea(
      "mapping-input",
      "word mapping (JSON list, optional; empty derives one)",
      "",
    );
    this.mappingInput.placeholder = '[{"3": "oname", "5": "aname"}]';
    const betaLabel = make("label", undefined, "match threshold ");
    this.betaInput = make("input", "beta-input");
    this.betaInput.type = "number";
    this.betaInput.step = "0.05";
    this.betaInput.min = "0";
    this.betaInput.max = "1";
    betaLabel.appendChild(this.betaInput);
    this.customFields.appendChild(betaLabel);
    form.appendChild(this.customFields);

    const run = make("button", "run-button", "run");
    run.type = "submit";
    form.appendChild(run);
    this.root.appendChild(form);

    this.banner = make("div", "banner");
    this.banner.setAttribute("role", "alert");
    this.banner.hidden = true;
    this.root.appendChild(this.banner);

    this.results = make("section", "results");
    this.results.hidden = true;
    this.results.appendChild(make("h2", undefined, "answers"));
    this.runQuestion = make("p", "run-question");
    this.answerList = make("ul", "answer-list");
    this.noAnswers = make("p", "no-answers", "no answers for this question");
    this.noAnswers.hidden = true;
    this.results.append(this.runQuestion, this.answerList, this.noAnswers);
    this.root.appendChild(this.results);

    this.updateSourceTabs();
  }

  private addTextarea(
    className: string,
    labelText: string,
    value: string,
  ): HTMLTextAreaElement {
    const label = make("label", undefined, `${labelText} `);
    const area = make("textarea", className);
    area.value = value;
    area.rows = 4;
    label.appendChild(area);
    this.customFields.appendChild(label);
    return area;
  }

  private setSource(kind: "fixture" | "custom"): void {
    this.sourceKind = kind;
    this.updateSourceTabs();
  }

  private updateSourceTabs(): void {
    for (const tab of this.root.querySelectorAll<HTMLButtonElement>(".tab")) {
      const active = tab.dataset.source === this.sourceKind;
      tab.setAttribute("aria-pressed", active ? "true" : "false");
    }
    this.fixtureFields.hidden = this.sourceKind !== "fixture";
    this.customFields.hidden = this.sourceKind !== "custom";
  }

  private populateFixtureSelect(): void {
    this.fixtureSelect.textContent = "";
    for (const fixture of this.fixtures) {
      const option = make("option", undefined, fixture.name);
      option.value = fixture.name;
      this.fixtureSelect.appendChild(option);
    }
    this.populateQuerySelect();
  }

  private populateQuerySelect(): void {
    this.querySelect.textContent = "";
    const fixture = this.fixtures.find(
      (f) => f.name === this.fixtureSelect.value,
    );
    for (const query of fixture?.queries ?? []) {
      const option = make("option", undefined, query.name);
      option.value = query.name;
      this.querySelect.appendChild(option);
    }
    this.updateQuestionPreview();
  }

  private updateQuestionPreview(): void {
    const fixture = this.fixtures.find(
      (f) => f.name === this.fixtureSelect.value,
    );
    const query = fixture?.queries.find(
      (q) => q.name === this.querySelect.value,
    );
    this.questionPreview.textContent = query?.question ?? "";
  }

  // ------------------------------------------------------------- submit

  submitFixture(fixture: string, query: string): Promise<void> {
    return this.track(
      this.doSubmit({ fixture, query }, { kind: "fixture", fixture, query }),
    );
  }

  submitCustom(): Promise<void> {
    return this.track(this.doSubmitCustom());
  }

  private async doSubmitCustom(): Promise<void> {
    const spec: InlineSpec = {
      schema_text: this.schemaInput.value,
      tables: this.parseJsonField(this.tablesInput.value, "tables") as Record<
        string,
        string
      >,
      tree: this.treeInput.value,
      query: this.queryInput.value,
    };
    if (this.questionInput.value.trim()) {
      spec.question = this.questionInput.value;
    }
    if (this.mappingInput.value.trim()) {
      spec.mapping = this.parseJsonField(
        this.mappingInput.value,
        "mapping",
      ) as unknown[];
    }
    if (this.betaInput.value.trim()) {
      spec.beta = Number(this.betaInput.value);
    }
    await this.doSubmit({ inline: spec }, { kind: "inline" });
  }

  private parseJsonField(text: string, field: string): unknown {
    try {
      return JSON.parse(text);
    } catch (err) {
      throw new ServiceError(0, {
        code: "BAD_FORM",
        message: `${field} is not valid JSON: ${String(err)}`,
        stage: "form",
      });
    }
  }

  private async doSubmit(body: QueryBody, source: RunSource): Promise<void> {
    this.clearBanner();
    const run = await this.client.submit(body);
    const changed = this.run === null || this.run.run_id !== run.run_id;
    this.run = run;
    this.source = source;
    if (changed) {
      this.panels.clear();
      this.openAnswer = null;
    }
    this.renderResults();
    this.syncUrl();
  }

  // ------------------------------------------------------------ answers

  private renderResults(): void {
    const run = this.run;
    this.panelEls.clear();
    this.answerList.textContent = "";
    this.results.hidden = run === null;
    if (run === null) {
      return;
    }
    this.runQuestion.textContent = run.question;
    this.noAnswers.hidden = run.answers.length > 0;
    for (const answer of run.answers) {
      this.answerList.appendChild(this.buildRow(answer));
    }
    this.updatePanels();
  }

  private buildRow(answer: AnswerPayload): HTMLLIElement {
    const row = make("li", "answer-row");
    const toggle = make("button", "answer-toggle");
    toggle.type = "button";
    toggle.setAttribute("aria-expanded", "false");
    toggle.appendChild(make("span", "answer-name", answer.answer_text));
    const unit = answer.assignments === 1 ? "explanation" : "explanations";
    toggle.appendChild(
      make("span", "answer-count", `${answer.assignments} ${unit}`),
    );
    toggle.addEventListener("click", () => this.toggleAnswer(answer.id));

    const els = this.buildPanel(answer, toggle);
    row.append(toggle, els.panel);
    this.panelEls.set(answer.id, els);
    return row;
  }

  private buildPanel(
    answer: AnswerPayload,
    toggle: HTMLButtonElement,
  ): PanelElements {
    const panel = make("div", "panel");
    panel.hidden = true;
    panel.id = `panel-${answer.index}`;
    toggle.setAttribute("aria-controls", panel.id);

    const modeSwitch = make("div", "mode-switch");
    modeSwitch.setAttribute("role", "group");
    modeSwitch.setAttribute("aria-label", "explanation mode");
    const modeButtons: HTMLButtonElement[] = [];
    for (const mode of MODES) {
      const button = make("button", "mode-button", mode);
      button.type = "button";
      button.dataset.mode = mode;
      if (mode === "summarized" && answer.levels.length === 0) {
        button.disabled = true;
      }
      button.addEventListener("click", () => this.setMode(answer.id, mode));
      modeButtons.push(button);
      modeSwitch.appendChild(button);
    }
    panel.appendChild(modeSwitch);

    const levelBox = make("div", "level-control");
    levelBox.hidden = true;
    const sliderId = `level-${answer.index}`;
    const label = make("label", undefined, "summarize over ");
    label.setAttribute("for", sliderId);
    const levelWord = make("output", "level-word");
    label.appendChild(levelWord);
    const slider = make("input", "level-slider");
    slider.type = "range";
    slider.id = sliderId;
    slider.min = "0";
    slider.max = String(Math.max(answer.levels.length - 1, 0));
    slider.step = "1";
    slider.addEventListener("input", () => {
      const level = answer.levels[Number(slider.value)];
      if (level !== undefined) {
        this.setLevel(answer.id, String(level.word_id));
      }
    });
    const levelLabels = make("div", "level-labels");
    for (const level of answer.levels) {
      levelLabels.appendChild(make("span", undefined, level.word));
    }
    levelBox.append(label, slider, levelLabels);
    panel.appendChild(levelBox);

    const sentence = make("pre", "sentence");
    panel.appendChild(sentence);

    return {
      toggle,
      panel,
      modeButtons,
      levelBox,
      slider,
      levelWord,
      levelLabels,
      sentence,
    };
  }

  toggleAnswer(answerId: string): void {
    this.openAnswer = this.openAnswer === answerId ? null : answerId;
    this.updatePanels();
    this.syncUrl();
  }

  setMode(answerId: string, mode: Mode): void {
    this.panels.setMode(answerId, mode);
    this.updatePanels();
    this.syncUrl();
  }

  setLevel(answerId: string, level: string): void {
    this.panels.setLevel(answerId, level);
    this.updatePanels();
    this.syncUrl();
  }

  private answerById(answerId: string): AnswerPayload | undefined {
    return this.run?.answers.find((a) => a.id === answerId);
  }

  private updatePanels(): void {
    for (const [answerId, els] of this.panelEls) {
      const open = answerId === this.openAnswer;
      els.toggle.setAttribute("aria-expanded", open ? "true" : "false");
      els.panel.hidden = !open;
      if (!open) {
        continue;
      }
      const answer = this.answerById(answerId);
      if (answer === undefined) {
        continue;
      }
      const state = this.panels.get(answerId);
      for (const button of els.modeButtons) {
        button.setAttribute(
          "aria-pressed",
          button.dataset.mode === state.mode ? "true" : "false",
        );
      }
      const summarized = state.mode === "summarized";
      els.levelBox.hidden = !summarized;
      if (summarized) {
        if (
          state.level === null ||
          !answer.levels.some((l) => String(l.word_id) === state.level)
        ) {
          // default to the coarsest level on offer
          state.level = String(answer.levels[0]?.word_id ?? "");
        }
        const index = answer.levels.findIndex(
          (l) => String(l.word_id) === state.level,
        );
        const word = answer.levels[index]?.word ?? "";
        els.slider.value = String(Math.max(index, 0));
        els.slider.setAttribute("aria-valuetext", word);
        els.levelWord.textContent = word;
        const spans = els.levelLabels.querySelectorAll("span");
        spans.forEach((span, i) => {
          span.classList.toggle("active", i === index);
        });
      }
      els.sentence.dataset.mode = state.mode;
      void this.track(this.fillSentence(answerId, els));
    }
  }

  private async fillSentence(
    answerId: string,
    els: PanelElements,
  ): Promise<void> {
    const state = this.panels.get(answerId);
    const token = (this.sentenceTokens.get(answerId) ?? 0) + 1;
    this.sentenceTokens.set(answerId, token);
    els.sentence.setAttribute("data-loading", "true");
    const level = state.mode === "summarized"
      ? state.level ?? undefined
      : undefined;
    const payload = await this.client.explanation(answerId, state.mode, level);
    if (this.sentenceTokens.get(answerId) !== token) {
      return; // a newer request owns the panel
    }
    els.sentence.removeAttribute("data-loading");
    els.sentence.textContent = payload.pretty;
  }

  // ---------------------------------------------------------------- url

  private syncUrl(): void {
    const params: SessionParams = { ...EMPTY_PARAMS };
    if (this.source?.kind === "fixture") {
      params.fixture = this.source.fixture;
      params.query = this.source.query;
    }
    if (this.openAnswer !== null) {
      const state = this.panels.get(this.openAnswer);
      params.answer = this.openAnswer;
      params.mode = state.mode;
      params.level = state.mode === "summarized" ? state.level : null;
    }
    const search = applyParams(this.win.location.search, params);
    const target = search
      ? `?${search}`
      : this.win.location.pathname;
    this.win.history.replaceState(null, "", target);
  }

  private async restoreFromUrl(): Promise<void> {
    const params = parseParams(this.win.location.search);
    if (params.fixture !== null && params.query !== null) {
      if (this.fixtures.some((f) => f.name === params.fixture)) {
        this.fixtureSelect.value = params.fixture;
        this.populateQuerySelect();
        this.querySelect.value = params.query;
        this.updateQuestionPreview();
      }
      const same =
        this.source?.kind === "fixture" &&
        this.source.fixture === params.fixture &&
        this.source.query === params.query;
      if (!same) {
        await this.doSubmit(
          { fixture: params.fixture, query: params.query },
          { kind: "fixture", fixture: params.fixture, query: params.query },
        );
      }
    }
    if (
      params.answer !== null &&
      this.answerById(params.answer) !== undefined
    ) {
      this.openAnswer = params.answer;
      this.panels.setMode(params.answer, params.mode ?? DEFAULT_MODE);
      if (params.level !== null) {
        this.panels.setLevel(params.answer, params.level);
      }
      this.updatePanels();
    }
  }

  // ------------------------------------------------------------- banner

  private showError(err: unknown): void {
    const error = err instanceof ServiceError
      ? err
      : new ServiceError(0, {
        code: "CLIENT",
        message: String(err),
        stage: "client",
      });
    const label = STAGE_LABELS[error.stage] ?? error.stage;
    this.banner.textContent = "";
    this.banner.dataset.stage = error.stage;
    this.banner.dataset.code = error.code;
    this.banner.appendChild(make("strong", undefined, `${label} failure`));
    this.banner.appendChild(document.createTextNode(` ${error.message}`));
    this.banner.hidden = false;
  }

  private clearBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = "";
    delete this.banner.dataset.stage;
    delete this.banner.dataset.code;
  }
}
