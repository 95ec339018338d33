/** Visual constants shared by every chart.
 *
 * Curve roles: unobtrusive grey for the base, saturated purple for the
 * current subset, desaturated purple for the previous one.  Red marks
 * above-mean territory, blue below-mean; the instance is always green.
 * A texture option for colorblind users is reserved (textures.highlight).
 */

export const theme = {
  curve: {
    base: "#9a9a9a",
    previous: "#c4a9de",
    current: "#7a3ab3",
    truth: "#333333",
    mainEffect: "#2b6cb0",
  },
  aboveMean: "#d64541",
  belowMean: "#3b6fd4",
  backgroundAboveOpacity: 0.07,
  backgroundBelowOpacity: 0.07,
  highlightOpacity: 0.35,
  uncertainty: { fill: "#7a3ab3", opacity: 0.18 },
  instance: "#2e9e46",
  meanLine: "#444444",
  axis: "#666666",
  heat: "#5b2d87",
  textures: { highlight: null as string | null },
};

export type Theme = typeof theme;
