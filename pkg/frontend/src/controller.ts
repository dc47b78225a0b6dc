/** Explorer state machine: one scene derived purely from the last served
 * view document, one in-flight mutation at a time, flag-gated controls,
 * and verbatim service error surfacing. */

import { ApiClient, ServiceError, type StatRequest } from "./client.js";
import { DocumentError, parseViewDocument, toViewModel } from "./documents.js";
import { TERMINAL_TOOLTIP, buildScene } from "./scene.js";
import type { Scene, ViewModel, ViewNode, Viewport } from "./types.js";

export const PENDING_REASON = "move pending";
export const NOT_IN_VIEW_REASON = "not in view";

/** What a control invocation produced.  "blocked" moves never reach the
 * service; "rejected" ones carry the service reason verbatim. */
export type MoveOutcome =
  | { kind: "applied" }
  | { kind: "blocked"; reason: string; cluster: number | null }
  | { kind: "rejected"; reason: string; detail: string; cluster: number | null };

export interface SurfacedError {
  reason: string;
  detail: string;
  cluster: number | null;
}

export interface SceneChange {
  previous: Scene | null;
  next: Scene;
}

export class Explorer {
  private model: ViewModel | null = null;

  scene: Scene | null = null;
  banner: string | null = null;
  lastError: SurfacedError | null = null;
  pending = false;
  stat: StatRequest | null = null;

  private readonly listeners: Array<(change: SceneChange) => void> = [];

  constructor(
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly viewport: Viewport,
  ) {}

  /** The mount animates between change.previous and change.next. */
  onChange(listener: (change: SceneChange) => void): void {
    this.listeners.push(listener);
  }

  node(id: number): ViewNode | undefined {
    return this.model?.nodes.find((n) => n.id === id);
  }

  /** Fetch the current view and rebuild the scene from scratch; the scene
   * is a pure function of the served document, so reloading reproduces
   * the identical picture. */
  async load(): Promise<void> {
    try {
      const doc = await this.api.view(this.sessionId, this.stat ?? undefined);
      this.model = toViewModel(doc);
      this.banner = null;
      this.replaceScene(buildScene(this.model, this.viewport));
    } catch (err) {
      this.absorb(err, null);
      throw err;
    }
  }

  async refine(cluster: number): Promise<MoveOutcome> {
    const node = this.node(cluster);
    if (node === undefined) {
      return this.blocked(NOT_IN_VIEW_REASON, cluster);
    }
    if (!node.refinable) {
      return this.blocked(TERMINAL_TOOLTIP, cluster);
    }
    return this.mutate(cluster, () => this.api.refine(this.sessionId, cluster));
  }

  async coarsen(target: number): Promise<MoveOutcome> {
    const node = this.node(target);
    if (node === undefined) {
      return this.blocked(NOT_IN_VIEW_REASON, target);
    }
    return this.mutate(target, () => this.api.coarsen(this.sessionId, target));
  }

  async undo(): Promise<MoveOutcome> {
    return this.mutate(null, () => this.api.undo(this.sessionId));
  }

  /** Switch attribute coloring and refetch; the stat request only changes
   * color numbers, never geometry. */
  async setStat(stat: StatRequest | null): Promise<MoveOutcome> {
    if (this.pending) {
      return this.blocked(PENDING_REASON, null);
    }
    const previous = this.stat;
    this.stat = stat;
    try {
      await this.load();
      return { kind: "applied" };
    } catch (err) {
      this.stat = previous;
      return this.asOutcome(err, null);
    }
  }

  private async mutate(cluster: number | null, call: () => Promise<void>): Promise<MoveOutcome> {
    if (this.pending) {
      return this.blocked(PENDING_REASON, cluster);
    }
    this.pending = true;
    try {
      await call();
      await this.load();
      this.lastError = null;
      return { kind: "applied" };
    } catch (err) {
      return this.asOutcome(err, cluster);
    } finally {
      this.pending = false;
    }
  }

  private blocked(reason: string, cluster: number | null): MoveOutcome {
    return { kind: "blocked", reason, cluster };
  }

  private asOutcome(err: unknown, cluster: number | null): MoveOutcome {
    this.absorb(err, cluster);
    if (err instanceof ServiceError) {
      return { kind: "rejected", reason: err.reason, detail: err.detail, cluster };
    }
    if (err instanceof DocumentError) {
      return { kind: "rejected", reason: "bad document", detail: err.message, cluster };
    }
    throw err;
  }

  private absorb(err: unknown, cluster: number | null): void {
    if (err instanceof ServiceError) {
      this.lastError = { reason: err.reason, detail: err.detail, cluster };
    } else if (err instanceof DocumentError) {
      this.banner = err.message;
    }
  }

  private replaceScene(next: Scene): void {
    const previous = this.scene;
    this.scene = next;
    for (const listener of this.listeners) {
      listener({ previous, next });
    }
  }
}

/** Convenience for tests and scripts: build a scene directly from raw
 * document bytes, exactly as the controller would. */
export function sceneFromDocument(raw: unknown, viewport: Viewport): Scene {
  return buildScene(toViewModel(parseViewDocument(raw)), viewport);
}
