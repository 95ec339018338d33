/** Page orchestration: one session, three panels, server-owned state. */

import { SessionApi } from "./api.js";
import { renderDependencePlot } from "./dependencePlot.js";
import { renderFeaturePicker, type PreviewMode } from "./featurePicker.js";
import { renderDistributionHeatmaps } from "./heatmapStrips.js";
import type { ViewPayload } from "./types.js";

export interface AppPanels {
  plot: HTMLElement;
  strips: HTMLElement;
  picker: HTMLElement;
}

export class ExplorerApp {
  private previewMode: PreviewMode = "standard";

  constructor(
    private api: SessionApi,
    private panels: AppPanels,
  ) {}

  async refresh(): Promise<ViewPayload | null> {
    const payload = await this.api.payload();
    if (payload === null) return null; // superseded; a newer refresh is in flight
    renderDependencePlot(this.panels.plot, payload);
    renderDistributionHeatmaps(this.panels.strips, payload);
    const ranking = await this.api.ranking();
    if (ranking !== null) {
      renderFeaturePicker(this.panels.picker, ranking, {
        mode: this.previewMode,
        onSelect: (feature) => void this.addFeature(feature),
      });
    }
    return payload;
  }

  async setXFeature(feature: string): Promise<void> {
    await this.api.command("set_x_feature", { feature });
    await this.refresh();
  }

  async addFeature(feature: string): Promise<void> {
    await this.api.command("add_feature", { feature });
    await this.refresh();
  }

  async removeLast(): Promise<void> {
    await this.api.command("remove_last");
    await this.refresh();
  }

  async setView(options: Record<string, unknown>): Promise<void> {
    await this.api.command("set_view", options);
    await this.refresh();
  }

  setPreviewMode(mode: PreviewMode): void {
    this.previewMode = mode;
  }
}
