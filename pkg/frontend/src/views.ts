/** DOM builders. Every displayed number comes from an API payload. */

import type {
  DecisionResult,
  EstimatePayload,
  Proposal,
  SessionSummary,
  Situation,
  Vertex,
} from "./api.js";
import { Mapper, arrowEnd, bounds, fmt, fmtCell, fmtPoint, polygonPoints, sparkline } from "./geometry.js";

export interface ErrorState {
  status: number;
  error: string;
  detail: string;
}

export interface ViewState {
  session: SessionSummary | null;
  situation: Situation | null;
  selected: number[] | null;
  preview: Vertex | null;
  lastDecision: DecisionResult | null;
  estimate: EstimatePayload | null;
  proposal: Proposal | null;
  correcting: boolean;
  error: ErrorState | null;
  fixtureCursor: number;
  fixtureTotal: number;
}

export interface Handlers {
  onVertexPick(point: number[]): void;
  onVertexHover(v: Vertex | null): void;
  onNextFixture(): void;
  onReplayAll(): void;
  onPolygon(): void;
  onGenerate(): void;
  onPropose(): void;
  onApprove(): void;
  onToggleCorrect(): void;
  onDismissError(): void;
}

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  for (const child of children) {
    node.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return node;
}

function svg(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function pointKey(p: number[]): string {
  return p.join(",");
}

function cellPoint(p: number[]): string {
  return `(${p.map(fmtCell).join(", ")})`;
}

function activeSetText(v: Vertex): string {
  return `{${v.active_set.join(", ")}}`;
}

export function renderApp(root: HTMLElement, state: ViewState, handlers: Handlers): void {
  root.replaceChildren(
    header(state),
    ...(state.error ? [errorBanner(state.error, handlers)] : []),
    el(
      "main",
      { class: "panels" },
      situationPanel(state, handlers),
      estimatePanel(state),
    ),
  );
}

function header(state: ViewState): HTMLElement {
  const session = state.session;
  const steps = state.estimate ? state.estimate.steps : session ? session.steps : 0;
  const line = session
    ? `session ${session.id} | ${session.m}x${session.n} | mode ${session.mode} | steps ${steps}`
    : "connecting to the estimation service";
  return el(
    "header",
    {},
    el("h1", {}, "dm-console"),
    el("p", { id: "session-line", class: "session-line" }, line),
  );
}

function errorBanner(error: ErrorState, handlers: Handlers): HTMLElement {
  const dismiss = el("button", { id: "dismiss-error", type: "button" }, "dismiss");
  dismiss.addEventListener("click", () => handlers.onDismissError());
  const status = error.status > 0 ? ` (${error.status})` : "";
  return el(
    "div",
    { id: "error-banner", class: "error-banner", role: "alert" },
    el("strong", {}, `${error.error}${status}`),
    el("span", {}, ` ${error.detail}`),
    dismiss,
  );
}

function situationPanel(state: ViewState, handlers: Handlers): HTMLElement {
  const panel = el("section", { id: "situation-panel", class: "panel" });
  panel.append(el("h2", {}, "Situation"));
  panel.append(controls(state, handlers));

  const situation = state.situation;
  if (!situation) {
    panel.append(
      el(
        "p",
        { id: "situation-empty", class: "empty" },
        "No pending situation. Submit one to begin.",
      ),
    );
    return panel;
  }

  panel.append(
    el(
      "p",
      { id: "situation-dims" },
      `supply ${situation.supply.map(fmtCell).join(", ")} | demand ${situation.demand.map(fmtCell).join(", ")}`,
    ),
  );

  if (situation.d === 2) {
    panel.append(regionSvg(situation, state, handlers));
  } else {
    panel.append(
      el("p", { class: "note" }, "region is not planar; pick a vertex from the table"),
    );
  }

  panel.append(vertexTable(situation, state, handlers));

  const preview = el("div", { id: "plan-preview", class: "plan-preview" });
  fillPreview(preview, state.preview);
  panel.append(preview);

  if (state.proposal) {
    panel.append(proposalPanel(state, handlers));
  } else {
    const propose = el("button", { id: "propose", type: "button" }, "propose a plan");
    propose.addEventListener("click", () => handlers.onPropose());
    panel.append(el("div", { class: "row" }, propose));
  }
  return panel;
}

function controls(state: ViewState, handlers: Handlers): HTMLElement {
  const next = el("button", { id: "next-fixture", type: "button" },
    `next bundled situation (${state.fixtureCursor}/${state.fixtureTotal})`);
  if (state.fixtureCursor >= state.fixtureTotal) next.setAttribute("disabled", "");
  next.addEventListener("click", () => handlers.onNextFixture());

  const replay = el("button", { id: "replay-run", type: "button" }, "replay bundled run");
  if (state.fixtureCursor >= state.fixtureTotal) replay.setAttribute("disabled", "");
  replay.addEventListener("click", () => handlers.onReplayAll());

  const polygon = el("button", { id: "polygon-situation", type: "button" }, "polygon situation");
  polygon.addEventListener("click", () => handlers.onPolygon());

  const generate = el("button", { id: "generate-situation", type: "button" }, "generate situation");
  generate.addEventListener("click", () => handlers.onGenerate());

  return el("div", { class: "controls" }, next, replay, polygon, generate);
}

function regionSvg(situation: Situation, state: ViewState, handlers: Handlers): SVGElement {
  const mapper = new Mapper(bounds(situation.vertices.map((v) => v.point)));
  const view = svg("svg", {
    id: "region",
    viewBox: `0 0 ${mapper.width} ${mapper.height}`,
    width: String(mapper.width),
    height: String(mapper.height),
    role: "img",
  });

  if (situation.vertices.length >= 3) {
    view.append(
      svg("polygon", {
        class: "region-fill",
        points: polygonPoints(mapper, situation.vertices.map((v) => v.point)),
      }),
    );
  }

  for (const edge of situation.edges) {
    const [x1, y1] = mapper.project(situation.vertices[edge.from].point);
    const [x2, y2] = mapper.project(situation.vertices[edge.to].point);
    view.append(
      svg("line", {
        class: "region-edge",
        x1: String(x1),
        y1: String(y1),
        x2: String(x2),
        y2: String(y2),
        "data-constraint": edge.constraint === null ? "" : String(edge.constraint),
      }),
    );
  }

  const selectedKey = state.selected ? pointKey(state.selected) : null;
  for (const vertex of situation.vertices) {
    const [cx, cy] = mapper.project(vertex.point);
    const key = pointKey(vertex.point);
    const circle = svg("circle", {
      class: key === selectedKey ? "vertex selected" : "vertex",
      cx: String(cx),
      cy: String(cy),
      r: "7",
      "data-point": key,
    });
    circle.addEventListener("click", () => handlers.onVertexPick(vertex.point));
    circle.addEventListener("mouseenter", () => handlers.onVertexHover(vertex));
    circle.addEventListener("mouseleave", () => handlers.onVertexHover(null));
    view.append(circle);
    const label = svg("text", {
      class: "vertex-label",
      x: String(cx + 9),
      y: String(cy - 9),
    });
    label.textContent = cellPoint(vertex.point);
    view.append(label);
  }
  return view;
}

function vertexTable(situation: Situation, state: ViewState, handlers: Handlers): HTMLElement {
  const table = el("table", { id: "vertex-table" });
  table.append(
    el(
      "thead",
      {},
      el("tr", {}, el("th", {}, "vertex"), el("th", {}, "active set"), el("th", {}, "")),
    ),
  );
  const body = el("tbody");
  const selectedKey = state.selected ? pointKey(state.selected) : null;
  for (const vertex of situation.vertices) {
    const key = pointKey(vertex.point);
    const pick = el(
      "button",
      { class: "pick", type: "button", "data-point": key },
      state.correcting ? "correct with this" : "choose",
    );
    pick.addEventListener("click", () => handlers.onVertexPick(vertex.point));
    const row = el(
      "tr",
      { class: key === selectedKey ? "selected" : "" },
      el("td", {}, cellPoint(vertex.point)),
      el("td", {}, activeSetText(vertex)),
      el("td", {}, pick),
    );
    row.addEventListener("mouseenter", () => handlers.onVertexHover(vertex));
    row.addEventListener("mouseleave", () => handlers.onVertexHover(null));
    body.append(row);
  }
  table.append(body);
  return table;
}

function fillPreview(container: HTMLElement, vertex: Vertex | null): void {
  if (!vertex) {
    container.replaceChildren(
      el("p", { class: "note" }, "hover a vertex to preview its full plan"),
    );
    return;
  }
  container.replaceChildren(
    el("p", { class: "note" }, `plan at ${cellPoint(vertex.point)}`),
    planTable(vertex.plan),
  );
}

/** Swap the hover preview without rebuilding the page. */
export function renderPreview(root: HTMLElement, vertex: Vertex | null): void {
  const container = root.querySelector<HTMLElement>("#plan-preview");
  if (container) fillPreview(container, vertex);
}

function planTable(plan: number[][]): HTMLElement {
  const table = el("table", { class: "plan" });
  for (const row of plan) {
    table.append(el("tr", {}, ...row.map((v) => el("td", {}, fmtCell(v)))));
  }
  return table;
}

function proposalPanel(state: ViewState, handlers: Handlers): HTMLElement {
  const proposal = state.proposal!;
  const approve = el("button", { id: "approve-proposal", type: "button" }, "approve");
  approve.addEventListener("click", () => handlers.onApprove());
  const correct = el(
    "button",
    { id: "correct-proposal", type: "button", class: state.correcting ? "active" : "" },
    state.correcting ? "cancel correction" : "correct instead",
  );
  correct.addEventListener("click", () => handlers.onToggleCorrect());

  const pair = proposal.active_pair ? `{${proposal.active_pair.join(", ")}}` : "n/a";
  const panel = el(
    "section",
    { id: "proposal-panel", class: "proposal" },
    el("h3", {}, "Proposal"),
    el("p", { id: "proposal-vertex" }, `vertex ${cellPoint(proposal.vertex)}`),
    planTable(proposal.plan),
    el("p", { id: "proposal-meta" },
      `active pair ${pair} | by estimate ${fmtPoint(proposal.estimate)}`),
    el("div", { class: "row" }, approve, correct),
  );
  if (state.correcting) {
    panel.append(
      el("p", { class: "note", id: "correct-hint" }, "pick a vertex to ingest as the correction"),
    );
  }
  return panel;
}

function estimatePanel(state: ViewState): HTMLElement {
  const panel = el("section", { id: "estimate-panel", class: "panel" });
  panel.append(el("h2", {}, "Estimate"));

  const estimate = state.estimate;
  if (!estimate || estimate.steps === 0) {
    panel.append(
      el("p", { id: "estimate-empty", class: "empty" }, "No decisions ingested yet."),
    );
    return panel;
  }

  panel.append(compass(estimate.estimate));
  panel.append(
    el("p", { id: "estimate-value" }, `direction ${fmtPoint(estimate.estimate)}`),
    el("p", { id: "estimate-steps" }, `steps ${estimate.steps}`),
  );

  if (state.lastDecision) {
    const obs = state.lastDecision.observation;
    panel.append(
      el(
        "p",
        { id: "last-observation" },
        `last observation: pair {${obs.pair.join(", ")}}, weight ${fmt(obs.weight)}`,
      ),
    );
  }

  if (estimate.stop.stop) {
    panel.append(
      el(
        "div",
        { id: "stop-banner", class: "settled" },
        `estimate settled: mean shift ${fmt(estimate.stop.mean_delta, 4)}, spread ${fmt(estimate.stop.std_delta, 4)}`,
      ),
    );
  }

  panel.append(convergence(estimate.deltas));
  panel.append(historyTable(estimate));
  return panel;
}

function compass(direction: number[] | null): SVGElement {
  const size = 160;
  const c = size / 2;
  const r = c - 10;
  const view = svg("svg", {
    id: "compass",
    viewBox: `0 0 ${size} ${size}`,
    width: String(size),
    height: String(size),
    role: "img",
  });
  view.append(svg("circle", { class: "compass-ring", cx: String(c), cy: String(c), r: String(r) }));
  view.append(svg("line", { class: "axis", x1: "0", y1: String(c), x2: String(size), y2: String(c) }));
  view.append(svg("line", { class: "axis", x1: String(c), y1: "0", x2: String(c), y2: String(size) }));
  if (direction) {
    const [x2, y2] = arrowEnd(direction, c, c, r);
    view.append(
      svg("line", {
        id: "compass-arrow",
        class: "arrow",
        x1: String(c),
        y1: String(c),
        x2: String(x2),
        y2: String(y2),
      }),
    );
    view.append(svg("circle", { class: "arrow-tip", cx: String(x2), cy: String(y2), r: "4" }));
  }
  return view;
}

function convergence(deltas: (number | null)[]): HTMLElement {
  const width = 320;
  const height = 70;
  const view = svg("svg", {
    id: "convergence",
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
    role: "img",
  });
  const points = sparkline(deltas, width, height);
  if (points) view.append(svg("polyline", { class: "spark", points }));
  return el(
    "div",
    { class: "convergence" },
    el("p", { class: "note" }, "per-step direction shift"),
    view,
  );
}

function historyTable(estimate: EstimatePayload): HTMLElement {
  const table = el("table", { id: "history" });
  table.append(
    el(
      "thead",
      {},
      el(
        "tr",
        {},
        el("th", {}, "step"),
        el("th", {}, "direction"),
        el("th", {}, "running sums"),
      ),
    ),
  );
  const body = el("tbody");
  for (const record of estimate.history) {
    body.append(
      el(
        "tr",
        { "data-step": String(record.step) },
        el("td", {}, String(record.step)),
        el("td", {}, fmtPoint(record.e)),
        el("td", {}, fmtPoint(record.sums)),
      ),
    );
  }
  table.append(body);
  return table;
}
