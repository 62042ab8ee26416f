import { ScaleContinuousNumeric, scaleLinear, scaleLog } from "d3-scale";

/** Deterministic color palette, assigned by sorted system size. */
export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

const FMT = new Intl.NumberFormat("en-US", {
  maximumSignificantDigits: 6,
  useGrouping: false,
});

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate: ${x}`);
  return FMT.format(x);
}

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 460,
  left: 64,
  right: 20,
  top: 34,
  bottom: 50,
};

export type Scale = ScaleContinuousNumeric<number, number>;

export function makeScale(
  kind: "linear" | "log",
  domain: [number, number],
  range: [number, number],
): Scale {
  if (kind === "log") {
    if (domain[0] <= 0 || domain[1] <= 0) {
      throw new Error("log scale needs a positive domain");
    }
    return scaleLog().domain(domain).range(range).nice();
  }
  return scaleLinear().domain(domain).range(range).nice();
}

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  path(d: string, stroke: string, width = 1.5, dash?: string): void {
    const dd = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(`<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}"${dd}/>`);
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  text(
    x: number,
    y: number,
    s: string,
    opts: { size?: number; anchor?: string; rotate?: boolean; fill?: string } = {},
  ): void {
    const size = opts.size ?? 12;
    const anchor = opts.anchor ?? "start";
    const fill = opts.fill ?? "#111";
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}"${transform}>${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function tickFormat(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a >= 1e4 || a < 1e-3)) return v.toExponential(0).replace("+", "");
  return FMT.format(v);
}

/** Axes, tick marks and labels around a plot area. */
export function drawAxes(
  svg: Svg,
  frame: Frame,
  xs: Scale,
  ys: Scale,
  xLabel: string,
  yLabel: string,
  title?: string,
): void {
  const { left, top } = frame;
  const rightEdge = frame.width - frame.right;
  const bottomEdge = frame.height - frame.bottom;
  svg.line(left, bottomEdge, rightEdge, bottomEdge, "#111");
  svg.line(left, top, left, bottomEdge, "#111");
  for (const t of xs.ticks(6)) {
    const x = xs(t);
    if (x < left - 0.5 || x > rightEdge + 0.5) continue;
    svg.line(x, bottomEdge, x, bottomEdge + 5, "#111");
    svg.text(x, bottomEdge + 18, tickFormat(t), { anchor: "middle", size: 11 });
  }
  for (const t of ys.ticks(6)) {
    const y = ys(t);
    if (y < top - 0.5 || y > bottomEdge + 0.5) continue;
    svg.line(left - 5, y, left, y, "#111");
    svg.text(left - 8, y + 4, tickFormat(t), { anchor: "end", size: 11 });
  }
  svg.text((left + rightEdge) / 2, frame.height - 12, xLabel, { anchor: "middle" });
  svg.text(16, (top + bottomEdge) / 2, yLabel, { anchor: "middle", rotate: true });
  if (title) {
    svg.text((left + rightEdge) / 2, 20, title, { anchor: "middle", size: 14 });
  }
}

export function drawLegend(
  svg: Svg,
  frame: Frame,
  entries: { label: string; color: string }[],
  corner: "tl" | "tr" | "bl" = "tr",
): void {
  const rightEdge = frame.width - frame.right;
  const x = corner === "tl" || corner === "bl" ? frame.left + 10 : rightEdge - 86;
  let y = corner === "bl" ? frame.height - frame.bottom - 14 * entries.length - 8 : frame.top + 14;
  for (const e of entries) {
    svg.circle(x, y - 4, 3.2, e.color);
    svg.text(x + 8, y, e.label, { size: 11 });
    y += 14;
  }
}
