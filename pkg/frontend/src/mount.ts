/** Browser glue: inject the SVG scene into a host element, wire clicks to
 * refine, the toolbar to coarsen/undo/stat/export, and play the position
 * interpolation between consecutive scenes.  Everything interesting is a
 * pure function elsewhere; this file only touches the DOM. */

import type { ApiClient } from "./client.js";
import { Explorer } from "./controller.js";
import { sceneToSvg, transitionFrames } from "./scene.js";
import type { Scene, Viewport } from "./types.js";

const TRANSITION_STEPS = 12;

export interface MountOptions {
  viewport?: Viewport;
  exportFormat?: "view-json" | "hierarchy-json" | "svg" | "partition-tsv";
}

export function mountExplorer(
  host: HTMLElement,
  api: ApiClient,
  sessionId: string,
  options: MountOptions = {},
): Explorer {
  const viewport = options.viewport ?? { width: 900, height: 700 };
  const explorer = new Explorer(api, sessionId, viewport);

  const doc = host.ownerDocument;
  const banner = doc.createElement("div");
  banner.className = "modview-banner";
  banner.hidden = true;
  const toast = doc.createElement("div");
  toast.className = "modview-toast";
  toast.hidden = true;
  const toolbar = doc.createElement("div");
  toolbar.className = "modview-toolbar";
  const canvas = doc.createElement("div");
  canvas.className = "modview-canvas";
  host.replaceChildren(banner, toast, toolbar, canvas);

  const coarsenButton = doc.createElement("button");
  coarsenButton.textContent = "coarsen selected";
  const undoButton = doc.createElement("button");
  undoButton.textContent = "undo";
  const exportLink = doc.createElement("a");
  exportLink.textContent = "download";
  exportLink.href = api.exportUrl(sessionId, options.exportFormat ?? "svg");
  toolbar.append(coarsenButton, undoButton, exportLink);

  let selected: number | null = null;
  let frameTimer: ReturnType<typeof setTimeout> | null = null;

  function draw(scene: Scene): void {
    canvas.innerHTML = sceneToSvg(scene);
    for (const circle of canvas.querySelectorAll("circle")) {
      const id = Number(circle.getAttribute("data-id"));
      circle.addEventListener("click", () => {
        selected = id;
        void explorer.refine(id).then(showOutcome);
      });
    }
  }

  function showOutcome(): void {
    banner.hidden = explorer.banner === null;
    banner.textContent = explorer.banner ?? "";
    const err = explorer.lastError;
    toast.hidden = err === null;
    toast.textContent = err ? `${err.reason}: ${err.detail}` : "";
    coarsenButton.disabled = explorer.pending;
    undoButton.disabled = explorer.pending;
  }

  explorer.onChange(({ previous, next }) => {
    if (frameTimer !== null) {
      clearTimeout(frameTimer);
      frameTimer = null;
    }
    if (previous === null) {
      draw(next);
      return;
    }
    const frames = transitionFrames(previous, next, TRANSITION_STEPS);
    const play = (i: number): void => {
      const frame = frames[i];
      if (frame === undefined) {
        return;
      }
      draw(frame);
      frameTimer = setTimeout(() => play(i + 1), 16);
    };
    play(0);
  });

  coarsenButton.addEventListener("click", () => {
    if (selected !== null) {
      void explorer.coarsen(selected).then(showOutcome);
    }
  });
  undoButton.addEventListener("click", () => {
    void explorer.undo().then(showOutcome);
  });

  void explorer.load().then(showOutcome, showOutcome);
  return explorer;
}
