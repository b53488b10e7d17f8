/* DOM wiring. Everything visual is computed by the view modules; this file
 * only fetches payloads, paints scenes, and keeps ViewState in sync with
 * location.hash. Deliberately untested: the logic worth testing lives in
 * the pure modules.
 */

import { ApiClient, ApiError } from "./api.js";
import { debounce, decodeState, defaultState, encodeState } from "./state.js";
import type { ViewName, ViewState } from "./state.js";
import type { ReportSummary } from "./types.js";
import { layoutGraph } from "./views/graph.js";
import { expandedScene, stripColors } from "./views/histograms.js";
import { dendroScene } from "./views/dendro.js";
import { byteLength, pairScene, segmentText } from "./views/pair.js";
import { flagRows } from "./views/flags.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const VIEW_TITLES: Record<ViewName, string> = {
  graph: "graph",
  histograms: "histograms",
  dendrogram: "dendrogram",
  flags: "flags",
  pair: "pair",
};

const api = new ApiClient();
let report: ReportSummary | null = null;
let state: ViewState = decodeState(location.hash);
let inflight: AbortController | null = null;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

function banner(msg: string | null): void {
  const box = document.getElementById("banner") as HTMLElement;
  if (msg === null) {
    box.hidden = true;
    box.textContent = "";
  } else {
    box.hidden = false;
    box.textContent = msg;
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.status} ${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

function setState(patch: Partial<ViewState>): void {
  state = { ...state, ...patch };
  const hash = encodeState(state);
  if (location.hash !== hash) {
    // render() runs from the hashchange handler.
    location.hash = hash;
  } else {
    void render();
  }
}

function freshSignal(): AbortSignal {
  if (inflight !== null) inflight.abort();
  inflight = new AbortController();
  return inflight.signal;
}

function viewRoot(): HTMLElement {
  const root = document.getElementById("view") as HTMLElement;
  root.replaceChildren();
  return root;
}

/* ---------------- header controls ---------------- */

function paintChrome(rep: ReportSummary): void {
  const tabs = document.getElementById("tabs") as HTMLElement;
  tabs.replaceChildren();
  (Object.keys(VIEW_TITLES) as ViewName[]).forEach((name) => {
    const b = el("button", {}, VIEW_TITLES[name]);
    if (name === state.view) b.classList.add("active");
    b.addEventListener("click", () => setState({ view: name }));
    tabs.append(b);
  });

  const select = document.getElementById("test-select") as HTMLSelectElement;
  select.replaceChildren();
  for (const name of rep.algorithms) select.append(el("option", { value: name }, name));
  if (!rep.algorithms.includes(state.test)) state = { ...state, test: rep.algorithms[0] ?? state.test };
  select.value = state.test;
  select.onchange = () => setState({ test: select.value, focus: null, sel: null });

  const slider = document.getElementById("threshold-slider") as HTMLInputElement;
  const readout = document.getElementById("threshold-readout") as HTMLOutputElement;
  slider.value = String(state.threshold);
  readout.value = state.threshold.toFixed(4);

  // Native tick marks on the slider track for the stored cutoffs.
  const ticks = rep.results[state.test]?.thresholds ?? {};
  let list = document.getElementById("threshold-ticks") as HTMLDataListElement | null;
  if (list === null) {
    list = el("datalist", { id: "threshold-ticks" });
    slider.after(list);
    slider.setAttribute("list", "threshold-ticks");
  }
  list.replaceChildren();
  for (const [alpha, value] of Object.entries(ticks)) {
    list.append(el("option", { value: String(value), label: `alpha ${alpha}` }));
  }

  const commit = debounce((t: number) => setState({ threshold: t }), 100);
  slider.oninput = () => {
    readout.value = Number(slider.value).toFixed(4);
    commit(Number(slider.value));
  };
}

/* ---------------- graph ---------------- */

async function renderGraph(rep: ReportSummary): Promise<void> {
  const root = viewRoot();
  const opts = state.focus !== null ? { focus: state.focus, hops: state.hops } : {};
  const graph = await api.graph(state.test, state.threshold, opts, freshSignal());
  const W = Math.max(400, root.clientWidth - 32);
  const H = Math.max(360, window.innerHeight - 180);
  const scene = layoutGraph(graph, W, H);

  const bar = el("div");
  bar.append(
    el("span", { class: "hist-row-label" }, `${scene.edges.length} edges, ${scene.nodes.length} vertices`),
  );
  if (state.focus !== null) {
    const clear = el("button", {}, `showing ${state.hops}-hop neighborhood of ${state.focus} (clear)`);
    clear.addEventListener("click", () => setState({ focus: null }));
    bar.append(clear);
  }
  root.append(bar);

  const svg = svgEl("svg", { width: String(W), height: String(H) });
  for (const e of scene.edges) {
    const line = svgEl("line", {
      x1: String(e.x1),
      y1: String(e.y1),
      x2: String(e.x2),
      y2: String(e.y2),
      stroke: e.color,
      "stroke-width": String(e.width),
      class: "clickable",
    });
    const tip = svgEl("title", {});
    tip.textContent = `${e.a} / ${e.b}: ${e.distance.toFixed(4)}`;
    line.append(tip);
    line.addEventListener("dblclick", () => setState({ view: "pair", pair: [e.a, e.b] }));
    svg.append(line);
  }
  for (const n of scene.nodes) {
    const dot = svgEl("circle", {
      cx: String(n.x),
      cy: String(n.y),
      r: String(n.r),
      fill: "#d8dce3",
      class: "clickable",
    });
    dot.addEventListener("click", () => setState({ focus: n.id }));
    const label = svgEl("text", { x: String(n.x + 8), y: String(n.y + 4) });
    label.textContent = n.id;
    svg.append(dot, label);
  }
  root.append(svg);
}

/* ---------------- histograms ---------------- */

function paintStrip(colors: string[], onClick?: () => void): HTMLElement {
  const strip = el("div", { class: "hist-strip" });
  for (const c of colors) {
    const cell = el("div", { class: "cell" });
    cell.style.background = c;
    strip.append(cell);
  }
  if (onClick !== undefined) strip.addEventListener("click", onClick);
  return strip;
}

async function renderHistograms(rep: ReportSummary): Promise<void> {
  const root = viewRoot();
  const signal = freshSignal();
  const thresholds = rep.results[state.test]?.thresholds ?? {};

  const globalRow = el("div");
  globalRow.append(el("span", { class: "hist-row-label" }, "all pairs"));
  root.append(globalRow);
  const global = await api.histogram(state.test, {}, signal);
  globalRow.append(paintStrip(stripColors(global)));

  for (const id of rep.ids) {
    const row = el("div");
    const label = el("span", { class: "hist-row-label clickable" }, id);
    label.addEventListener("click", () => setState({ sel: state.sel === id ? null : id }));
    row.append(label);
    root.append(row);
    const hist = await api.histogram(state.test, { row: id }, signal);
    row.append(paintStrip(stripColors(hist), () => setState({ sel: state.sel === id ? null : id })));

    if (state.sel === id) {
      const detail = await api.histogram(state.test, { row: id, bins: state.bins }, signal);
      const scene = expandedScene(detail, thresholds);
      const W = 640;
      const H = 160;
      const svg = svgEl("svg", { width: String(W), height: String(H + 20) });
      for (const b of scene.bars) {
        if (b.count === 0) continue;
        svg.append(
          svgEl("rect", {
            x: String(b.x * W),
            y: String(H - b.h * H),
            width: String(Math.max(1, b.w * W - 1)),
            height: String(b.h * H),
            fill: "#6aa1ff",
          }),
        );
      }
      for (const m of scene.markers) {
        svg.append(
          svgEl("line", {
            x1: String(m.x * W),
            y1: "0",
            x2: String(m.x * W),
            y2: String(H),
            stroke: "#ff5d5d",
            "stroke-dasharray": "4 3",
          }),
        );
        const t = svgEl("text", { x: String(m.x * W + 3), y: "12" });
        t.textContent = `alpha ${m.label}`;
        svg.append(t);
      }
      const binsPick = el("select", {});
      for (const b of [16, 32, 64, 128, 256]) binsPick.append(el("option", { value: String(b) }, String(b)));
      binsPick.value = String(state.bins);
      binsPick.onchange = () => setState({ bins: Number(binsPick.value) });
      const controls = el("div");
      controls.append(el("span", { class: "hist-row-label" }, "bins"), binsPick);
      row.append(controls, svg);
    }
  }
}

/* ---------------- dendrogram ---------------- */

async function renderDendrogram(rep: ReportSummary): Promise<void> {
  const root = viewRoot();
  const payload = await api.dendrogram(state.test, state.linkage, freshSignal());
  const scene = dendroScene(rep.ids, payload, state.threshold);

  const pick = el("select", {});
  for (const l of ["single", "complete", "average"]) pick.append(el("option", { value: l }, l));
  pick.value = state.linkage;
  pick.onchange = () => setState({ linkage: pick.value as ViewState["linkage"] });
  const bar = el("div");
  bar.append(
    el("span", { class: "hist-row-label" }, "linkage"),
    pick,
    el("span", { class: "hist-row-label" }, ` ${scene.clusterCount} clusters at ${scene.cutY.toFixed(4)}`),
  );
  root.append(bar);

  const W = Math.max(500, root.clientWidth - 32);
  const H = 420;
  const PAD = 40;
  const x = (u: number) => u * (W - 2 * PAD) + PAD;
  const y = (d: number) => H - d * (H - 2 * PAD) - PAD;
  const svg = svgEl("svg", { width: String(W), height: String(H) });
  for (const s of scene.segments) {
    svg.append(
      svgEl("line", {
        x1: String(x(s.x1)),
        y1: String(y(s.y1)),
        x2: String(x(s.x2)),
        y2: String(y(s.y2)),
        stroke: "#848b96",
      }),
    );
  }
  svg.append(
    svgEl("line", {
      x1: String(x(0)),
      y1: String(y(scene.cutY)),
      x2: String(x(1)),
      y2: String(y(scene.cutY)),
      stroke: "#ff5d5d",
      "stroke-dasharray": "6 4",
    }),
  );
  for (const leaf of scene.leaves) {
    svg.append(
      svgEl("circle", { cx: String(x(leaf.x)), cy: String(y(0) + 6), r: "4", fill: leaf.color }),
    );
    const label = svgEl("text", {
      x: String(x(leaf.x)),
      y: String(y(0) + 18),
      transform: `rotate(45 ${x(leaf.x)} ${y(0) + 18})`,
    });
    label.textContent = leaf.id;
    svg.append(label);
  }
  root.append(svg);
}

/* ---------------- flags ---------------- */

async function renderFlags(rep: ReportSummary): Promise<void> {
  const root = viewRoot();

  const scenarioPick = el("select", { id: "scenario" });
  for (const s of ["A", "B"]) scenarioPick.append(el("option", { value: s }, `scenario ${s}`));
  const alphaPick = el("select", { id: "alpha" });
  for (const a of rep.alphas) alphaPick.append(el("option", { value: String(a) }, `alpha ${a}`));
  if (rep.alphas.includes(state.alpha)) alphaPick.value = String(state.alpha);
  alphaPick.onchange = () => setState({ alpha: Number(alphaPick.value) });
  const bar = el("div");
  bar.append(scenarioPick, el("span", {}, " "), alphaPick);
  root.append(bar);

  let scenario = scenarioPick.value as "A" | "B";
  scenarioPick.onchange = () => {
    scenario = scenarioPick.value as "A" | "B";
    void render();
  };

  const payload = await api.flags(state.test, scenario, Number(alphaPick.value), freshSignal());
  const table = el("table", { class: "flag-table" });
  const head = el("tr");
  for (const h of ["pair", "distance", "score", "row"]) head.append(el("th", {}, h));
  table.append(head);
  for (const r of flagRows(payload)) {
    const tr = el("tr", { class: "clickable" });
    tr.append(
      el("td", {}, `${r.a} / ${r.b}`),
      el("td", {}, r.distance.toFixed(4)),
      el("td", {}, r.scoreLabel),
      el("td", {}, r.row ?? ""),
    );
    tr.addEventListener("click", () => setState({ view: "pair", pair: [r.a, r.b] }));
    table.append(tr);
  }
  root.append(
    el("p", {}, `cutoff ${payload.threshold_value.toFixed(6)}, ${payload.flags.length} flagged pairs`),
    table,
  );
}

/* ---------------- pair ---------------- */

function paintPane(text: string, spans: ReturnType<typeof pairScene>["left"], side: string): HTMLElement {
  const pre = el("pre", { "data-side": side });
  for (const seg of segmentText(text, spans)) {
    const span = el("span", {}, seg.text);
    if (seg.color !== null) {
      span.style.background = seg.color;
      span.style.color = "#14161a";
      span.setAttribute("data-tile", String(seg.tile));
      span.classList.add("clickable");
      span.addEventListener("click", () => {
        const other = side === "a" ? "b" : "a";
        const match = document.querySelector(`pre[data-side="${other}"] span[data-tile="${seg.tile}"]`);
        match?.scrollIntoView({ block: "center", behavior: "smooth" });
      });
    }
    pre.append(span);
  }
  return pre;
}

async function renderPair(rep: ReportSummary): Promise<void> {
  const root = viewRoot();
  if (state.pair === null) {
    root.append(el("p", {}, "Pick a pair: double-click a graph edge or click a flag row."));
    return;
  }
  const [a, b] = state.pair;
  const signal = freshSignal();
  const payload = await api.pair(state.test, a, b, state.n, signal);
  const pathA = rep.files[a]?.[0];
  const pathB = rep.files[b]?.[0];
  if (pathA === undefined || pathB === undefined) {
    throw new ApiError(404, "unknown_id", `no file listing for ${a} or ${b}`);
  }
  const [srcA, srcB] = await Promise.all([
    api.source(a, pathA, signal),
    api.source(b, pathB, signal),
  ]);
  const scene = pairScene(payload, byteLength(srcA.text), byteLength(srcB.text), state.n);

  const nPick = el("input", { type: "number", min: "1", max: "50", value: String(state.n) });
  nPick.onchange = () => setState({ n: Math.max(1, Number(nPick.value) || 1) });
  const bar = el("div");
  bar.append(
    el("span", {}, `${a} vs ${b}: coverage ${(scene.coverage * 100).toFixed(1)}%, tiles `),
    nPick,
  );
  root.append(bar);

  const panes = el("div", { class: "pair-panes" });
  const left = el("div");
  left.append(el("p", {}, `${a}/${pathA}`), paintPane(srcA.text, scene.left, "a"));
  const right = el("div");
  right.append(el("p", {}, `${b}/${pathB}`), paintPane(srcB.text, scene.right, "b"));
  panes.append(left, right);
  root.append(panes);
}

/* ---------------- shell ---------------- */

async function render(): Promise<void> {
  if (report === null) return;
  paintChrome(report);
  try {
    switch (state.view) {
      case "graph":
        await renderGraph(report);
        break;
      case "histograms":
        await renderHistograms(report);
        break;
      case "dendrogram":
        await renderDendrogram(report);
        break;
      case "flags":
        await renderFlags(report);
        break;
      case "pair":
        await renderPair(report);
        break;
    }
    banner(null);
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return;
    // Keep whatever is on screen; the banner is advisory.
    banner(describe(err));
  }
}

async function boot(): Promise<void> {
  try {
    report = await api.report();
  } catch (err) {
    banner(`cannot load report: ${describe(err)}`);
    return;
  }
  if (!report.algorithms.includes(state.test)) {
    state = { ...state, test: report.algorithms[0] ?? defaultState().test };
  }
  window.addEventListener("hashchange", () => {
    state = decodeState(location.hash, state);
    void render();
  });
  await render();
}

void boot();
