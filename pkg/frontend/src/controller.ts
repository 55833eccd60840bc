/** State machine for the console; every state change round-trips the API. */

import { ApiClient, ApiError } from "./api.js";
import type { DecisionResult, Vertex } from "./api.js";
import { FIXTURE_DECISIONS, POLYGON_SITUATION } from "./fixtures.js";
import { renderApp, renderPreview } from "./views.js";
import type { Handlers, ViewState } from "./views.js";

export class DmConsole {
  readonly state: ViewState = {
    session: null,
    situation: null,
    selected: null,
    preview: null,
    lastDecision: null,
    estimate: null,
    proposal: null,
    correcting: false,
    error: null,
    fixtureCursor: 0,
    fixtureTotal: FIXTURE_DECISIONS.length,
  };

  private chain: Promise<void> = Promise.resolve();
  private readonly handlers: Handlers;

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {
    this.handlers = {
      onVertexPick: (point) => void this.pick(point),
      onVertexHover: (v) => this.hover(v),
      onNextFixture: () => void this.nextFixture(),
      onReplayAll: () => void this.replayAll(),
      onPolygon: () => void this.polygonSituation(),
      onGenerate: () => void this.generateSituation(),
      onPropose: () => void this.propose(),
      onApprove: () => void this.approve(),
      onToggleCorrect: () => this.toggleCorrect(),
      onDismissError: () => this.dismissError(),
    };
  }

  /** Resolves when every queued action has finished. */
  settle(): Promise<void> {
    return this.chain;
  }

  mount(mode = "assist"): Promise<void> {
    this.render();
    return this.start(mode);
  }

  start(mode = "assist"): Promise<void> {
    return this.run(async () => {
      this.state.session = await this.api.createSession({ m: 2, n: 3, mode });
    });
  }

  submitSituation(supply: number[], demand: number[]): Promise<void> {
    return this.run(() => this.loadSituation(supply, demand));
  }

  nextFixture(): Promise<void> {
    return this.run(async () => {
      const row = FIXTURE_DECISIONS[this.state.fixtureCursor];
      if (!row) return;
      await this.loadSituation(row.supply, row.demand);
      this.state.fixtureCursor += 1;
    });
  }

  /** Submit and decide every remaining bundled row in one queued action. */
  replayAll(): Promise<void> {
    return this.run(async () => {
      while (this.state.fixtureCursor < FIXTURE_DECISIONS.length) {
        const row = FIXTURE_DECISIONS[this.state.fixtureCursor];
        await this.loadSituation(row.supply, row.demand);
        this.state.fixtureCursor += 1;
        await this.ingest(await this.api.decide(this.sid, row.point));
      }
    });
  }

  polygonSituation(): Promise<void> {
    return this.run(() => this.loadSituation(POLYGON_SITUATION.supply, POLYGON_SITUATION.demand));
  }

  generateSituation(): Promise<void> {
    return this.run(async () => {
      const { situation } = await this.api.generateSituation(this.sid, {});
      this.acceptSituation(situation);
    });
  }

  pick(point: number[]): Promise<void> {
    return this.state.correcting ? this.correct(point) : this.decide(point);
  }

  decide(point: number[]): Promise<void> {
    return this.run(async () => {
      this.state.selected = point;
      await this.ingest(await this.api.decide(this.sid, point));
    });
  }

  correct(point: number[]): Promise<void> {
    return this.run(async () => {
      this.state.selected = point;
      await this.ingest(await this.api.correctProposal(this.sid, point));
    });
  }

  propose(): Promise<void> {
    return this.run(async () => {
      this.state.proposal = await this.api.getProposal(this.sid);
    });
  }

  approve(): Promise<void> {
    return this.run(async () => {
      await this.ingest(await this.api.approveProposal(this.sid));
    });
  }

  toggleCorrect(): void {
    this.state.correcting = !this.state.correcting;
    this.render();
  }

  dismissError(): void {
    this.state.error = null;
    this.render();
  }

  hover(vertex: Vertex | null): void {
    this.state.preview = vertex;
    renderPreview(this.root, vertex);
  }

  render(): void {
    renderApp(this.root, this.state, this.handlers);
  }

  private get sid(): string {
    if (!this.state.session) throw new ApiError(0, "NoSession", "the session is not ready yet");
    return this.state.session.id;
  }

  private run(task: () => Promise<void>): Promise<void> {
    this.chain = this.chain
      .then(task)
      .catch((err) => this.fail(err))
      .then(() => this.render());
    return this.chain;
  }

  private fail(err: unknown): void {
    this.state.error =
      err instanceof ApiError
        ? { status: err.status, error: err.error, detail: err.detail }
        : { status: 0, error: "Error", detail: String(err) };
  }

  private async loadSituation(supply: number[], demand: number[]): Promise<void> {
    const { situation } = await this.api.submitSituation(this.sid, supply, demand);
    this.acceptSituation(situation);
  }

  private acceptSituation(situation: ViewState["situation"]): void {
    this.state.situation = situation;
    this.state.selected = null;
    this.state.preview = null;
    this.state.proposal = null;
    this.state.correcting = false;
  }

  private async ingest(result: DecisionResult): Promise<void> {
    this.state.lastDecision = result;
    this.state.situation = null;
    this.state.selected = null;
    this.state.preview = null;
    this.state.proposal = null;
    this.state.correcting = false;
    this.state.estimate = await this.api.getEstimate(this.sid);
  }
}
