import { readFileSync } from "node:fs";
import { line as d3line } from "d3-shape";
import { loadRows } from "./csv.js";
import {
  ClusterFit,
  CollapseFit,
  FigureSpec,
  ObservableRow,
  clusterFitSchema,
  collapseFitSchema,
  figureSpecSchema,
} from "./schema.js";
import {
  DEFAULT_FRAME,
  Frame,
  PALETTE,
  Scale,
  Svg,
  drawAxes,
  drawLegend,
  fmt,
  makeScale,
} from "./svg.js";

type XY = [number, number];

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function pad([lo, hi]: [number, number], frac = 0.06): [number, number] {
  const d = (hi - lo) * frac;
  return [lo - d, hi + d];
}

function pathOf(points: XY[], xs: Scale, ys: Scale): string {
  const gen = d3line<XY>()
    .x((d) => xs(d[0]))
    .y((d) => ys(d[1]));
  const d = gen(points);
  if (!d) throw new Error("empty path");
  return d;
}

function groupBySize(rows: ObservableRow[]): Map<number, ObservableRow[]> {
  const bySize = new Map<number, ObservableRow[]>();
  for (const r of rows) {
    const arr = bySize.get(r.L) ?? [];
    arr.push(r);
    bySize.set(r.L, arr);
  }
  return new Map([...bySize.entries()].sort((a, b) => a[0] - b[0]));
}

function errorBars(svg: Svg, xs: Scale, ys: Scale, pts: { x: number; y: number; e: number }[], color: string): void {
  for (const p of pts) {
    if (p.e <= 0) continue;
    svg.line(xs(p.x), ys(p.y - p.e), xs(p.x), ys(p.y + p.e), color, 1);
  }
}

function applyTransform(v: number, kind: "linear" | "log" | "inverse"): number {
  if (kind === "inverse") {
    if (v === 0) throw new Error("inverse transform undefined at 0");
    return 1 / v;
  }
  return v; // log handled by the scale itself
}

/** Collapse figure: scaled main panel plus an inset with the raw curves. */
function renderCollapse(spec: FigureSpec, rows: ObservableRow[], fit: CollapseFit): string {
  const frame = DEFAULT_FRAME;
  const svg = new Svg(frame.width, frame.height);
  const bySize = groupBySize(rows);

  const scaled: Map<number, { x: number; y: number; e: number }[]> = new Map();
  for (const [L, rs] of bySize) {
    const pts = rs
      .map((r) => ({
        x: (r.p - fit.p_c) * Math.pow(r.L, 1 / fit.nu),
        y: r.value,
        e: r.stderr,
      }))
      .sort((a, b) => a.x - b.x);
    scaled.set(L, pts);
  }
  const allPts = [...scaled.values()].flat();
  const xs = makeScale("linear", pad(extent(allPts.map((p) => p.x))), [
    frame.left,
    frame.width - frame.right,
  ]);
  const ys = makeScale("linear", pad(extent(allPts.flatMap((p) => [p.y - p.e, p.y + p.e]))), [
    frame.height - frame.bottom,
    frame.top,
  ]);
  const title =
    spec.title ?? `collapse: p_c=${fmt(fit.p_c)}, nu=${fmt(fit.nu)}`;
  drawAxes(svg, frame, xs, ys, `(p - p_c) L^(1/nu)`, spec.observable, title);

  const entries: { label: string; color: string }[] = [];
  let k = 0;
  for (const [L, pts] of scaled) {
    const color = PALETTE[k % PALETTE.length];
    k += 1;
    svg.path(pathOf(pts.map((p) => [p.x, p.y] as XY), xs, ys), color, 1.2);
    errorBars(svg, xs, ys, pts, color);
    for (const p of pts) svg.circle(xs(p.x), ys(p.y), 2.6, color);
    entries.push({ label: `L = ${L}`, color });
  }
  drawLegend(svg, frame, entries, "bl");

  // inset: raw curves vs p
  const inset: Frame = {
    width: frame.width,
    height: frame.height,
    left: frame.width - 245,
    right: 25,
    top: frame.top + 14,
    bottom: frame.height - (frame.top + 14) - 140,
  };
  const rawPts = [...bySize.values()].flat();
  const ixs = makeScale("linear", extent(rawPts.map((r) => r.p)), [
    inset.left,
    frame.width - inset.right,
  ]);
  const iys = makeScale("linear", pad(extent(rawPts.map((r) => r.value))), [
    frame.height - inset.bottom,
    inset.top,
  ]);
  svg.raw(
    `<rect x="${inset.left - 6}" y="${inset.top - 6}" width="${frame.width - inset.right - inset.left + 12}" ` +
      `height="${frame.height - inset.bottom - inset.top + 12}" fill="white" stroke="#999"/>`,
  );
  k = 0;
  for (const [, rs] of bySize) {
    const color = PALETTE[k % PALETTE.length];
    k += 1;
    const pts = rs
      .map((r) => [r.p, r.value] as XY)
      .sort((a, b) => a[0] - b[0]);
    svg.path(pathOf(pts, ixs, iys), color, 1);
    for (const p of pts) svg.circle(ixs(p[0]), iys(p[1]), 1.8, color);
  }
  svg.text(inset.left, frame.height - inset.bottom + 14, "raw vs p", { size: 10, fill: "#555" });
  return svg.render();
}

/** Cluster-number distribution on log-log axes with tail-fit overlays. */
function renderDistribution(spec: FigureSpec, rows: ObservableRow[], fit?: ClusterFit): string {
  const frame = DEFAULT_FRAME;
  const svg = new Svg(frame.width, frame.height);
  const prefix = `${spec.observable}_`;
  const pts = rows
    .filter((r) => r.observable.startsWith(prefix))
    .map((r) => ({
      s: Number(r.observable.slice(prefix.length)),
      y: r.value,
      e: r.stderr,
    }))
    .filter((p) => Number.isFinite(p.s) && p.y > 0)
    .sort((a, b) => a.s - b.s);
  if (pts.length === 0) {
    throw new Error(`no rows with observable prefix '${prefix}'`);
  }
  const xs = makeScale("log", extent(pts.map((p) => p.s)), [frame.left, frame.width - frame.right]);
  const ys = makeScale("log", extent(pts.map((p) => p.y)), [frame.height - frame.bottom, frame.top]);
  drawAxes(svg, frame, xs, ys, "cluster size s", "n_s", spec.title ?? "cluster-size distribution");
  for (const p of pts) svg.circle(xs(p.s), ys(p.y), 2.6, PALETTE[0]);

  if (fit) {
    const { tau, omega, c0, c1 } = fit.params;
    const [wLo, wHi] = fit.window ?? [pts[0].s, pts[pts.length - 1].s];
    const curve: XY[] = [];
    for (let i = 0; i <= 80; i++) {
      const s = wLo * Math.pow(wHi / wLo, i / 80);
      const v = Math.pow(s, -tau) * (c0 + c1 * Math.pow(s, -omega));
      if (v > 0) curve.push([s, v]);
    }
    svg.path(pathOf(curve, xs, ys), PALETTE[1], 1.6, "6,3");
    svg.text(frame.left + 12, frame.top + 16, `tau = ${fmt(tau)}, omega = ${fmt(omega)}`, {
      size: 12,
      fill: PALETTE[1],
    });
  }
  return svg.render();
}

/** Per-size time series with the documented axis transforms. */
function renderDynamics(spec: FigureSpec, rows: ObservableRow[]): string {
  const frame = DEFAULT_FRAME;
  const svg = new Svg(frame.width, frame.height);
  const tx = spec.transforms?.x ?? "linear";
  const ty = spec.transforms?.y ?? "linear";
  const bySize = groupBySize(rows);
  const pts = [...bySize.values()].flat().map((r) => ({
    x: applyTransform(r.t, tx),
    y: applyTransform(r.value, ty),
  }));
  const xs = makeScale(tx === "log" ? "log" : "linear", pad(extent(pts.map((p) => p.x))), [
    frame.left,
    frame.width - frame.right,
  ]);
  const ys = makeScale(ty === "log" ? "log" : "linear", pad(extent(pts.map((p) => p.y))), [
    frame.height - frame.bottom,
    frame.top,
  ]);
  const xLabel = tx === "inverse" ? "1/t" : "t";
  drawAxes(svg, frame, xs, ys, xLabel, spec.observable, spec.title);
  const entries: { label: string; color: string }[] = [];
  let k = 0;
  for (const [L, rs] of bySize) {
    const color = PALETTE[k % PALETTE.length];
    k += 1;
    const series = rs
      .map((r) => [applyTransform(r.t, tx), applyTransform(r.value, ty)] as XY)
      .sort((a, b) => a[0] - b[0]);
    svg.path(pathOf(series, xs, ys), color, 1.4);
    entries.push({ label: `L = ${L}`, color });
  }
  drawLegend(svg, frame, entries);
  return svg.render();
}

/** Observable vs system size on log-log axes (exponent read-off). */
function renderLogLog(spec: FigureSpec, rows: ObservableRow[]): string {
  const frame = DEFAULT_FRAME;
  const svg = new Svg(frame.width, frame.height);
  const pts = rows
    .map((r) => ({ x: r.L, y: r.value, e: r.stderr }))
    .filter((p) => p.y > 0)
    .sort((a, b) => a.x - b.x);
  if (pts.length === 0) throw new Error("no positive observable rows for log-log plot");
  const xs = makeScale("log", extent(pts.map((p) => p.x)), [frame.left, frame.width - frame.right]);
  const ys = makeScale("log", extent(pts.map((p) => p.y)), [frame.height - frame.bottom, frame.top]);
  drawAxes(svg, frame, xs, ys, "L", spec.observable, spec.title);
  svg.path(pathOf(pts.map((p) => [p.x, p.y] as XY), xs, ys), PALETTE[0], 1.2);
  for (const p of pts) svg.circle(xs(p.x), ys(p.y), 2.8, PALETTE[0]);
  errorBars(svg, xs, ys, pts, PALETTE[0]);
  return svg.render();
}

/** Validate a spec object and render it to an SVG string. */
export function renderFigure(specInput: unknown): string {
  const spec = figureSpecSchema.parse(specInput);
  let rows = loadRows(spec.csv);
  if (spec.p !== undefined) rows = rows.filter((r) => Math.abs(r.p - spec.p!) < 1e-12);
  if (spec.L !== undefined) rows = rows.filter((r) => r.L === spec.L);

  if (spec.kind === "distribution") {
    let fit: ClusterFit | undefined;
    if (spec.fit) fit = clusterFitSchema.parse(JSON.parse(readFileSync(spec.fit, "utf8")));
    return renderDistribution(spec, rows, fit);
  }

  const matching = rows.filter((r) => r.observable === spec.observable);
  if (matching.length === 0) {
    throw new Error(`no rows with observable '${spec.observable}'`);
  }
  if (spec.kind === "collapse") {
    if (!spec.fit) throw new Error("collapse figures need a fit-overlay JSON (p_c, nu)");
    const fit = collapseFitSchema.parse(JSON.parse(readFileSync(spec.fit, "utf8")));
    return renderCollapse(spec, matching, fit);
  }
  if (spec.kind === "dynamics") return renderDynamics(spec, matching);
  return renderLogLog(spec, matching);
}
