export { loadObservableCsv, loadRows } from "./csv.js";
export { renderFigure } from "./figures.js";
export {
  CSV_COLUMNS,
  clusterFitSchema,
  collapseFitSchema,
  figureSpecSchema,
} from "./schema.js";
export type { ClusterFit, CollapseFit, FigureSpec, ObservableRow } from "./schema.js";
