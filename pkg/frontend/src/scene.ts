/** Pure rendering: view model -> pixel scene -> SVG markup, plus the
 * interpolator used to animate between two served layouts.  No analytics
 * happen here; geometry and color numbers arrive precomputed. */

import { CIRCLE_STROKE, applyTransform, edgeWidth, fillFor, viewTransform } from "./scale.js";
import type { Scene, SceneCircle, SceneSegment, Viewport, ViewModel } from "./types.js";

export const TERMINAL_TOOLTIP = "no significant substructure";

export function buildScene(model: ViewModel, viewport: Viewport): Scene {
  const t = viewTransform(model.bounds, viewport);
  const centers = new Map<number, [number, number]>();
  const circles: SceneCircle[] = model.nodes.map((node) => {
    const [cx, cy] = applyTransform(t, node.x, node.y);
    centers.set(node.id, [cx, cy]);
    const label = `cluster ${node.id} (size ${node.size})`;
    return {
      id: node.id,
      cx,
      cy,
      r: t.scale * node.radius,
      fill: fillFor(model.scale, node.color),
      stroke: CIRCLE_STROKE,
      size: node.size,
      refinable: node.refinable,
      coarsenable: node.coarsenable,
      tooltip: node.refinable ? label : `${label}; ${TERMINAL_TOOLTIP}`,
    };
  });
  const segments: SceneSegment[] = model.edges.map((edge) => {
    const a = centers.get(edge.source)!;
    const b = centers.get(edge.target)!;
    return {
      source: edge.source,
      target: edge.target,
      x1: a[0],
      y1: a[1],
      x2: b[0],
      y2: b[1],
      width: edgeWidth(edge.weight),
    };
  });
  return { width: viewport.width, height: viewport.height, segments, circles };
}

/** Deterministic SVG serialization; equal scenes serialize to equal
 * strings, which is what "pixel-identical" means in the tests. */
export function sceneToSvg(scene: Scene): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${scene.width}" height="${scene.height}" ` +
      `viewBox="0 0 ${scene.width} ${scene.height}">`,
  ];
  for (const s of scene.segments) {
    parts.push(
      `<line x1="${fmt(s.x1)}" y1="${fmt(s.y1)}" x2="${fmt(s.x2)}" y2="${fmt(s.y2)}" ` +
        `stroke="rgb(102,102,102)" stroke-width="${fmt(s.width)}"/>`,
    );
  }
  for (const c of scene.circles) {
    parts.push(
      `<circle cx="${fmt(c.cx)}" cy="${fmt(c.cy)}" r="${fmt(c.r)}" ` +
        `fill="${c.fill}" stroke="${c.stroke}" data-id="${c.id}">` +
        `<title>${c.tooltip}</title></circle>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function fmt(v: number): string {
  return v.toFixed(3);
}

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Blend two scenes for the refine/coarsen transition.  Exact at both
 * endpoints; circles present on only one side grow from or shrink to
 * radius zero in place. */
export function interpolateScene(from: Scene, to: Scene, t: number): Scene {
  if (t <= 0) {
    return from;
  }
  if (t >= 1) {
    return to;
  }
  const fromCircles = new Map(from.circles.map((c) => [c.id, c]));
  const toCircles = new Map(to.circles.map((c) => [c.id, c]));
  const circles: SceneCircle[] = [];
  for (const target of to.circles) {
    const prior = fromCircles.get(target.id);
    if (prior) {
      circles.push({
        ...target,
        cx: lerp(prior.cx, target.cx, t),
        cy: lerp(prior.cy, target.cy, t),
        r: lerp(prior.r, target.r, t),
      });
    } else {
      circles.push({ ...target, r: target.r * t });
    }
  }
  for (const prior of from.circles) {
    if (!toCircles.has(prior.id)) {
      circles.push({ ...prior, r: prior.r * (1 - t) });
    }
  }
  circles.sort((a, b) => a.id - b.id);

  const centers = new Map(circles.map((c) => [c.id, [c.cx, c.cy] as const]));
  const fromWidths = new Map(from.segments.map((s) => [`${s.source}-${s.target}`, s.width]));
  const segments: SceneSegment[] = to.segments.map((s) => {
    const a = centers.get(s.source);
    const b = centers.get(s.target);
    const prior = fromWidths.get(`${s.source}-${s.target}`);
    return {
      ...s,
      x1: a ? a[0] : s.x1,
      y1: a ? a[1] : s.y1,
      x2: b ? b[0] : s.x2,
      y2: b ? b[1] : s.y2,
      width: prior === undefined ? s.width * t : lerp(prior, s.width, t),
    };
  });
  return { width: to.width, height: to.height, segments, circles };
}

/** Frame sequence for a short transition, ending exactly on the target. */
export function transitionFrames(from: Scene, to: Scene, steps: number): Scene[] {
  const frames: Scene[] = [];
  for (let i = 1; i <= steps; i += 1) {
    frames.push(interpolateScene(from, to, i / steps));
  }
  return frames;
}
