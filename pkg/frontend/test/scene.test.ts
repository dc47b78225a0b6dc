import { describe, expect, it } from "vitest";

import { sceneFromDocument } from "../src/controller.js";
import { parseViewDocument, toViewModel } from "../src/documents.js";
import {
  TERMINAL_TOOLTIP,
  buildScene,
  interpolateScene,
  sceneToSvg,
  transitionFrames,
} from "../src/scene.js";
import type { ViewDocument } from "../src/types.js";
import { fixtureJson } from "./support.js";

const VIEWPORT = { width: 900, height: 700 };

function singleNodeDoc(): ViewDocument {
  return parseViewDocument({
    nodes: [
      {
        id: 0,
        x: 500,
        y: 500,
        radius: 300,
        size: 60,
        refinable: false,
        coarsenable: false,
        color: null,
      },
    ],
    edges: [],
    q: 0,
    threshold: 0.1,
    no_structure: true,
    stat: null,
    bounds: [0, 0, 1000, 1000],
  });
}

describe("scene construction", () => {
  it("renders a one-node view as a single centered circle", () => {
    const scene = buildScene(toViewModel(singleNodeDoc()), VIEWPORT);
    expect(scene.circles).toHaveLength(1);
    expect(scene.segments).toHaveLength(0);
    expect(scene.circles[0]!.cx).toBeCloseTo(VIEWPORT.width / 2, 9);
    expect(scene.circles[0]!.cy).toBeCloseTo(VIEWPORT.height / 2, 9);
  });

  it("labels terminal clusters with the disabled-refine tooltip", () => {
    const scene = sceneFromDocument(fixtureJson("planted_base.json"), VIEWPORT);
    for (const circle of scene.circles) {
      expect(circle.tooltip).toContain(`cluster ${circle.id} (size ${circle.size})`);
      if (circle.refinable) {
        expect(circle.tooltip).not.toContain(TERMINAL_TOOLTIP);
      } else {
        expect(circle.tooltip).toContain(TERMINAL_TOOLTIP);
      }
    }
  });

  it("connects segments to the circle centers they join", () => {
    const scene = sceneFromDocument(fixtureJson("grouped_base.json"), VIEWPORT);
    const byId = new Map(scene.circles.map((c) => [c.id, c]));
    for (const s of scene.segments) {
      expect(s.x1).toBe(byId.get(s.source)!.cx);
      expect(s.y1).toBe(byId.get(s.source)!.cy);
      expect(s.x2).toBe(byId.get(s.target)!.cx);
      expect(s.y2).toBe(byId.get(s.target)!.cy);
    }
  });

  it("is deterministic: same document, same scene, same markup", () => {
    const raw = fixtureJson("grouped_base.json");
    const a = sceneFromDocument(raw, VIEWPORT);
    const b = sceneFromDocument(raw, VIEWPORT);
    expect(b).toEqual(a);
    expect(sceneToSvg(b)).toBe(sceneToSvg(a));
  });

  it("serializes edges below circles with tooltips embedded", () => {
    const svg = sceneToSvg(sceneFromDocument(fixtureJson("planted_base.json"), VIEWPORT));
    const firstCircle = svg.indexOf("<circle");
    const lastLine = svg.lastIndexOf("<line");
    expect(lastLine).toBeGreaterThan(-1);
    expect(lastLine).toBeLessThan(firstCircle);
    expect(svg).toContain("<title>");
    expect(svg.trim().startsWith("<svg")).toBe(true);
    expect(svg.trim().endsWith("</svg>")).toBe(true);
  });
});

describe("scene interpolation", () => {
  const from = sceneFromDocument(fixtureJson("planted_coarsened.json"), VIEWPORT);
  const to = sceneFromDocument(fixtureJson("planted_refined.json"), VIEWPORT);

  it("is exact at both endpoints", () => {
    expect(interpolateScene(from, to, 0)).toBe(from);
    expect(interpolateScene(from, to, 1)).toBe(to);
    const frames = transitionFrames(from, to, 8);
    expect(frames).toHaveLength(8);
    expect(frames[7]).toBe(to);
  });

  it("moves shared circles along straight lines", () => {
    const shared = to.circles.find((c) => from.circles.some((f) => f.id === c.id))!;
    const start = from.circles.find((f) => f.id === shared.id)!;
    const mid = interpolateScene(from, to, 0.5);
    const blended = mid.circles.find((c) => c.id === shared.id)!;
    expect(blended.cx).toBeCloseTo((start.cx + shared.cx) / 2, 9);
    expect(blended.cy).toBeCloseTo((start.cy + shared.cy) / 2, 9);
    expect(blended.r).toBeCloseTo((start.r + shared.r) / 2, 9);
  });

  it("grows entering circles from radius zero and shrinks exiting ones", () => {
    const entering = to.circles.filter((c) => !from.circles.some((f) => f.id === c.id));
    const exiting = from.circles.filter((f) => !to.circles.some((c) => c.id === f.id));
    expect(entering.length).toBeGreaterThan(0);
    expect(exiting.length).toBeGreaterThan(0);
    const quarter = interpolateScene(from, to, 0.25);
    for (const c of entering) {
      expect(quarter.circles.find((q) => q.id === c.id)!.r).toBeCloseTo(c.r * 0.25, 9);
    }
    for (const f of exiting) {
      expect(quarter.circles.find((q) => q.id === f.id)!.r).toBeCloseTo(f.r * 0.75, 9);
    }
  });

  it("keeps segments attached to blended centers", () => {
    const mid = interpolateScene(from, to, 0.5);
    const centers = new Map(mid.circles.map((c) => [c.id, c]));
    for (const s of mid.segments) {
      const a = centers.get(s.source);
      const b = centers.get(s.target);
      if (a) {
        expect(s.x1).toBeCloseTo(a.cx, 9);
        expect(s.y1).toBeCloseTo(a.cy, 9);
      }
      if (b) {
        expect(s.x2).toBeCloseTo(b.cx, 9);
        expect(s.y2).toBeCloseTo(b.cy, 9);
      }
    }
  });
});
