#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { renderFigure } from "./figures.js";

function usage(): never {
  console.error("usage: miptlab-plot plot --spec FILE --out FILE");
  process.exit(2);
}

export function main(argv: string[]): number {
  if (argv[0] !== "plot") usage();
  let values;
  try {
    ({ values } = parseArgs({
      args: argv.slice(1),
      options: {
        spec: { type: "string" },
        out: { type: "string" },
      },
    }));
  } catch {
    usage();
  }
  if (!values.spec || !values.out) usage();
  let spec: unknown;
  try {
    spec = JSON.parse(readFileSync(values.spec, "utf8"));
  } catch (err) {
    console.error(`cannot read spec: ${(err as Error).message}`);
    return 2;
  }
  try {
    const svg = renderFigure(spec);
    writeFileSync(values.out, svg);
  } catch (err) {
    // no partial output on failure
    console.error(`plot failed: ${(err as Error).message}`);
    return 1;
  }
  console.log(`wrote ${values.out}`);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
