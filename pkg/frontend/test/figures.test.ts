import { mkdtempSync, existsSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { loadObservableCsv } from "../src/csv.js";
import { renderFigure } from "../src/figures.js";
import { main as cliMain } from "../src/cli.js";

const FIX = join(__dirname, "..", "fixtures");

const collapseSpec = {
  kind: "collapse",
  csv: join(FIX, "i3_1d.csv"),
  observable: "i3_steady",
  fit: join(FIX, "collapse_fit.json"),
};

const distributionSpec = {
  kind: "distribution",
  csv: join(FIX, "clusters_1d.csv"),
  observable: "nstail",
  L: 64,
  fit: join(FIX, "cluster_fit.json"),
};

describe("csv loading", () => {
  it("loads the documented schema", () => {
    const rows = loadObservableCsv(join(FIX, "i3_1d.csv"));
    expect(rows.length).toBeGreaterThan(0);
    expect(rows[0]).toHaveProperty("observable");
    expect(typeof rows[0].value).toBe("number");
  });

  it("rejects a schema mismatch", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "protocol,L,p\nclifford1d,8,0.1\n");
    expect(() => loadObservableCsv(bad)).toThrow(/missing column/);
  });

  it("rejects an empty csv", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "protocol,L,p,t,observable,value,stderr,n_traj\n");
    expect(() => loadObservableCsv(empty)).toThrow(/empty CSV/);
  });
});

describe("figure rendering", () => {
  it("renders a collapse figure with main panel and inset", () => {
    const svg = renderFigure(collapseSpec);
    expect(svg).toContain("<svg");
    expect(svg).toContain("collapse");
    expect(svg).toContain("raw vs p");
    expect((svg.match(/<circle/g) ?? []).length).toBeGreaterThan(10);
  });

  it("renders a cluster-size distribution with the fit overlay", () => {
    const svg = renderFigure(distributionSpec);
    expect(svg).toContain("n_s");
    expect(svg).toContain("tau =");
    expect(svg).toContain("stroke-dasharray");
  });

  it("is deterministic across repeated renders", () => {
    const a = renderFigure(collapseSpec);
    const b = renderFigure(collapseSpec);
    expect(a).toBe(b);
    const c = renderFigure(distributionSpec);
    const d = renderFigure(distributionSpec);
    expect(c).toBe(d);
  });

  it("rejects unknown plot kinds and transforms", () => {
    expect(() => renderFigure({ ...collapseSpec, kind: "pie" })).toThrow();
    expect(() =>
      renderFigure({ ...collapseSpec, kind: "dynamics", transforms: { x: "sqrt" } }),
    ).toThrow();
  });

  it("fails when no rows match the observable", () => {
    expect(() => renderFigure({ ...collapseSpec, observable: "nope" })).toThrow(/no rows/);
  });
});

describe("cli", () => {
  it("writes an svg for a valid spec", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const specPath = join(dir, "spec.json");
    const outPath = join(dir, "fig.svg");
    writeFileSync(specPath, JSON.stringify(collapseSpec));
    const code = cliMain(["plot", "--spec", specPath, "--out", outPath]);
    expect(code).toBe(0);
    expect(readFileSync(outPath, "utf8")).toContain("</svg>");
  });

  it("writes nothing on failure", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const specPath = join(dir, "spec.json");
    const outPath = join(dir, "fig.svg");
    writeFileSync(specPath, JSON.stringify({ ...collapseSpec, observable: "nope" }));
    const code = cliMain(["plot", "--spec", specPath, "--out", outPath]);
    expect(code).toBe(1);
    expect(existsSync(outPath)).toBe(false);
  });
});
