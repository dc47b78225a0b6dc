/** Wire documents served by the clustering service under /v1, plus the
 * client-side view model and scene shapes derived from them.
 *
 * The client never recomputes analytics: every number here (positions,
 * radii, sizes, modularity, color values) comes from a served document.
 */

export type StatMode = "p" | "residual";
export type ScaleName = "gray-sequential" | "red-blue-diverging";

export interface ViewNode {
  id: number;
  x: number;
  y: number;
  radius: number;
  size: number;
  refinable: boolean;
  coarsenable: boolean;
  /** p-value or Pearson residual depending on stat.mode; null when the
   * view was requested without attribute statistics. */
  color: number | null;
}

export interface ViewEdge {
  source: number;
  target: number;
  weight: number;
}

export interface StatBlock {
  attribute: string;
  mode: StatMode;
  category: string | null;
  scale: ScaleName;
}

/** GET /v1/sessions/{id}/view */
export interface ViewDocument {
  nodes: ViewNode[];
  edges: ViewEdge[];
  q: number;
  threshold: number;
  no_structure: boolean;
  stat: StatBlock | null;
  bounds: [number, number, number, number];
}

/** GET /v1/sessions/{id}/status */
export interface StatusDocument {
  id: string;
  state: "building" | "ready" | "error";
  n: number;
  m: number;
  error?: string;
  clusters?: number;
  q?: number;
  threshold?: number;
  p?: number;
  no_structure?: boolean;
}

/** POST /v1/sessions */
export interface SessionDocument {
  id: string;
  status: "building" | "ready" | "error";
}

/** Body of every non-2xx service response. */
export interface ErrorDocument {
  error: { reason: string; detail: string };
}

/** What render() consumes: the view document plus the stat request that
 * produced it, normalized into one immutable record. */
export interface ViewModel {
  nodes: ViewNode[];
  edges: ViewEdge[];
  q: number;
  threshold: number;
  noStructure: boolean;
  statMode: StatMode | null;
  attribute: string | null;
  category: string | null;
  scale: ScaleName | null;
  bounds: [number, number, number, number];
}

/** Pixel-space drawing primitives; a deterministic function of a view
 * model and a viewport, compared structurally in tests. */
export interface SceneCircle {
  id: number;
  cx: number;
  cy: number;
  r: number;
  fill: string;
  stroke: string;
  size: number;
  refinable: boolean;
  coarsenable: boolean;
  tooltip: string;
}

export interface SceneSegment {
  source: number;
  target: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  width: number;
}

export interface Scene {
  width: number;
  height: number;
  segments: SceneSegment[];
  circles: SceneCircle[];
}

export interface Viewport {
  width: number;
  height: number;
}
