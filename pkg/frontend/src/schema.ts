import { z } from "zod";

/** One long-format observable row from the simulation CSV. */
export interface ObservableRow {
  protocol: string;
  L: number;
  p: number;
  t: number;
  observable: string;
  value: number;
  stderr: number;
  n_traj: number;
}

export const CSV_COLUMNS = [
  "protocol",
  "L",
  "p",
  "t",
  "observable",
  "value",
  "stderr",
  "n_traj",
] as const;

const axisTransform = z.enum(["linear", "log", "inverse"]);

/** Declarative figure description; axis transforms are a closed set. */
export const figureSpecSchema = z
  .object({
    kind: z.enum(["collapse", "loglog", "dynamics", "distribution"]),
    csv: z.union([z.string(), z.array(z.string()).nonempty()]),
    observable: z.string(),
    fit: z.string().optional(),
    transforms: z
      .object({
        x: axisTransform.optional(),
        y: axisTransform.optional(),
      })
      .strict()
      .optional(),
    title: z.string().optional(),
    /** restrict rows to one measurement rate (distribution/loglog kinds) */
    p: z.number().optional(),
    /** restrict rows to one system size (distribution kind) */
    L: z.number().optional(),
  })
  .strict();

export type FigureSpec = z.infer<typeof figureSpecSchema>;

/** Collapse fit report written by the analysis CLI. */
export const collapseFitSchema = z
  .object({
    p_c: z.number(),
    nu: z.number(),
    eps_min: z.number().optional(),
    p_c_err: z.number().optional(),
    nu_err: z.number().optional(),
  })
  .passthrough();

export type CollapseFit = z.infer<typeof collapseFitSchema>;

/** Cluster-tail fit report: n_s = s^-tau (c0 + c1 s^-Omega). */
export const clusterFitSchema = z
  .object({
    params: z.object({
      tau: z.number(),
      omega: z.number(),
      c0: z.number(),
      c1: z.number(),
    }),
    window: z.tuple([z.number(), z.number()]).optional(),
  })
  .passthrough();

export type ClusterFit = z.infer<typeof clusterFitSchema>;
