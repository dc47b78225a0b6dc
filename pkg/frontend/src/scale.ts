/** Fixed named color ramps and the viewport transform.
 *
 * Ramp endpoints are part of the client contract so screenshots are
 * comparable across sessions:
 *
 *   gray-sequential   p = 1       -> rgb(240,240,240)  (light, unremarkable)
 *                     p <= 1e-3   -> rgb(40,40,40)     (dark, significant)
 *                     darkness is linear in -log10(p), clipped at 3 decades
 *
 *   red-blue-diverging  residual <= -3 -> rgb(0,0,255)  (under-represented)
 *                       residual  =  0 -> rgb(255,255,255)
 *                       residual >= +3 -> rgb(255,0,0)  (over-represented)
 *
 * Nodes without a color value use NEUTRAL_FILL.
 */

import type { ScaleName, Viewport } from "./types.js";

export const NEUTRAL_FILL = "rgb(200,200,200)";
export const CIRCLE_STROKE = "rgb(51,51,51)";
export const GRAY_DECADES = 3.0;
export const RESIDUAL_LIMIT = 3.0;

/** Sequential ramp for p-values: smaller p draws darker. */
export function graySequential(p: number): string {
  let level: number;
  if (p <= 0) {
    level = 0.0;
  } else {
    level = Math.max(0.0, 1.0 - Math.min(-Math.log10(p), GRAY_DECADES) / GRAY_DECADES);
  }
  const v = Math.round(40 + 200 * level);
  return `rgb(${v},${v},${v})`;
}

/** Diverging ramp for Pearson residuals: red above expectation, blue
 * below, white at zero, saturating at +-RESIDUAL_LIMIT. */
export function redBlueDiverging(residual: number): string {
  const t = Math.max(-1.0, Math.min(1.0, residual / RESIDUAL_LIMIT));
  if (t >= 0) {
    const other = Math.round(255 * (1.0 - t));
    return `rgb(255,${other},${other})`;
  }
  const other = Math.round(255 * (1.0 + t));
  return `rgb(${other},${other},255)`;
}

export function fillFor(scale: ScaleName | null, color: number | null): string {
  if (color === null || scale === null) {
    return NEUTRAL_FILL;
  }
  return scale === "red-blue-diverging" ? redBlueDiverging(color) : graySequential(color);
}

/** Edge stroke width, monotone nondecreasing in the aggregated weight and
 * capped so hairballs stay legible. */
export function edgeWidth(weight: number): number {
  return Math.min(1.0 + 0.5 * (weight - 1), 6.0);
}

export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

/** Uniform map from layout bounds into a pixel viewport, centered.  A
 * single scale factor for both axes keeps circles circular and preserves
 * the area-to-size proportionality the layout guarantees. */
export function viewTransform(
  bounds: readonly [number, number, number, number],
  viewport: Viewport,
): Transform {
  const [x0, y0, x1, y1] = bounds;
  const scale = Math.min(viewport.width / (x1 - x0), viewport.height / (y1 - y0));
  const tx = (viewport.width - scale * (x1 - x0)) / 2 - scale * x0;
  const ty = (viewport.height - scale * (y1 - y0)) / 2 - scale * y0;
  return { scale, tx, ty };
}

export function applyTransform(t: Transform, x: number, y: number): [number, number] {
  return [t.scale * x + t.tx, t.scale * y + t.ty];
}
