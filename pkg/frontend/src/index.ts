export { ApiError, SessionApi, createSession } from "./api.js";
export { ExplorerApp } from "./app.js";
export { defaultLayout, renderDependencePlot } from "./dependencePlot.js";
export { renderFeaturePicker } from "./featurePicker.js";
export { renderDistributionHeatmaps } from "./heatmapStrips.js";
export { theme } from "./theme.js";
export { PayloadError, validatePayload } from "./viewModel.js";
export type * from "./types.js";
