export {
  CsvSchemaError,
  readCostTableCsv,
  readErrorCurveCsv,
  type CostRowData,
  type CostTableData,
  type ErrorCurveData,
} from "./csv.js";
export { renderErrorCurves, type ErrorCurveOptions } from "./errorCurves.js";
export { renderCostTable, type CostTableOptions } from "./costTable.js";
export { writeFigure } from "./render.js";
