import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { CSV_COLUMNS, ObservableRow } from "./schema.js";

/** Load one simulation CSV, enforcing the documented column schema. */
export function loadObservableCsv(path: string): ObservableRow[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`${path}: CSV parse error: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  for (const col of CSV_COLUMNS) {
    if (!fields.includes(col)) {
      throw new Error(`${path}: missing column '${col}' (schema mismatch)`);
    }
  }
  if (parsed.data.length === 0) {
    throw new Error(`${path}: empty CSV (no observable rows)`);
  }
  return parsed.data.map((raw, i) => {
    const num = (key: string): number => {
      const v = Number(raw[key]);
      if (!Number.isFinite(v)) {
        throw new Error(`${path}: row ${i + 1}: non-numeric '${key}' = ${raw[key]}`);
      }
      return v;
    };
    return {
      protocol: raw.protocol,
      L: num("L"),
      p: num("p"),
      t: num("t"),
      observable: raw.observable,
      value: num("value"),
      stderr: num("stderr"),
      n_traj: num("n_traj"),
    };
  });
}

export function loadRows(csv: string | string[]): ObservableRow[] {
  const paths = Array.isArray(csv) ? csv : [csv];
  return paths.flatMap((p) => loadObservableCsv(p));
}
