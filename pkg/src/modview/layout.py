"""Size-weighted force-directed layout of quotient graphs.

Fruchterman-Reingold variant where the repulsive force exerted BY a node is
proportional to the member count of the cluster it represents, so small
clusters are pushed clear of large ones.  Node surface encodes cluster size
(pi r^2 proportional to members).  Refine re-lays-out only the children of
the split cluster (everything else frozen in place); coarsen collapses
merged clusters to their size-weighted center of mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import QuotientGraph

DEFAULT_BOUNDS = (0.0, 0.0, 1000.0, 1000.0)
# Fraction of the bounds area shared out among node disks; keeps circles
# readable without overlapping everything at typical cluster counts.
FILL_FRACTION = 0.25
# Pairwise distances are clamped below at this multiple of k to avoid force
# singularities for coincident points.
MIN_DIST_FACTOR = 1e-6

REPULSION_MODES = ("weighted", "uniform", "product")


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class LayoutConfig:
    """Simulation knobs; the defaults match the interactive defaults."""

    iterations: int = 300
    area: float = 0.0  # 0 -> bounds area
    initial_temperature: float = 0.1  # fraction of the bounds diagonal
    seed: int = 0
    repulsion: str = "weighted"
    edge_weight_attraction: bool = False
    anchor_stiffness: float = 0.05
    bounds: tuple = DEFAULT_BOUNDS

    def __post_init__(self):
        if self.iterations < 1:
            raise LayoutError("iterations must be >= 1")
        if self.repulsion not in REPULSION_MODES:
            raise LayoutError(f"repulsion must be one of {REPULSION_MODES}")
        x0, y0, x1, y1 = self.bounds
        if not (x1 > x0 and y1 > y0):
            raise LayoutError("bounds must have positive extent")

    @property
    def bounds_area(self) -> float:
        x0, y0, x1, y1 = self.bounds
        return (x1 - x0) * (y1 - y0)

    @property
    def diagonal(self) -> float:
        x0, y0, x1, y1 = self.bounds
        return math.hypot(x1 - x0, y1 - y0)


@dataclass(frozen=True)
class Layout:
    """Positions and radii for one view's quotient nodes.

    ``area_scale`` is the constant in the radius law pi r^2 = area_scale *
    member_count; it is shared by every node of the layout and inherited by
    incremental updates so sizes stay comparable across refine/coarsen.
    """

    positions: dict  # cluster id -> (x, y)
    radii: dict  # cluster id -> r > 0
    bounds: tuple
    seed: int
    area_scale: float
    iterations: int
    initial_temperature: float

    def position_of(self, cluster_id) -> tuple:
        try:
            return self.positions[cluster_id]
        except KeyError:
            raise LayoutError(f"cluster {cluster_id} has no position") from None


def radius_for(count: int, area_scale: float) -> float:
    return math.sqrt(area_scale * count / math.pi)


def _area_scale(total_members: int, cfg: LayoutConfig) -> float:
    area = cfg.area if cfg.area > 0 else cfg.bounds_area
    return FILL_FRACTION * area / max(total_members, 1)


def _simulate(
    ids,
    pos: np.ndarray,
    weights: np.ndarray,
    edges,
    movable: np.ndarray,
    k: float,
    cfg: LayoutConfig,
    bounds,
    t0: float,
    anchor=None,
    attraction_cap: float | None = None,
    on_iteration=None,
) -> np.ndarray:
    """Shared FR loop.  ``pos`` is modified and returned.

    ``edges`` is a list of (i, j, weight) index pairs; ``movable`` masks the
    rows allowed to move; ``anchor`` is None or (center, stiffness) pulling
    every movable node toward a fixed point with a linear spring; ``t0`` is
    the starting temperature (displacement cap) in coordinate units.
    """
    n = len(ids)
    if n == 0:
        return pos
    x0, y0, x1, y1 = bounds
    min_dist = MIN_DIST_FACTOR * k
    if cfg.repulsion == "uniform":
        rep_w = np.ones(n)
    else:
        rep_w = weights.astype(float)
    for it in range(cfg.iterations):
        temp = t0 * (1.0 - it / cfg.iterations)
        disp = np.zeros_like(pos)
        # repulsion: force BY i ON j is rep_w[i] * k^2 / d, directed j <- i
        for j in range(n):
            if not movable[j]:
                continue
            diff = pos[j] - pos  # vectors i -> j
            dist = np.hypot(diff[:, 0], diff[:, 1])
            dist[j] = 1.0
            np.maximum(dist, min_dist, out=dist)
            mag = rep_w * (k * k) / dist
            if cfg.repulsion == "product":
                mag = mag * weights[j]
            mag[j] = 0.0
            disp[j, 0] += float(np.dot(mag / dist, diff[:, 0]))
            disp[j, 1] += float(np.dot(mag / dist, diff[:, 1]))
        # attraction along edges: d^2 / k toward the neighbor
        for i, j, w in edges:
            diff = pos[j] - pos[i]
            d = math.hypot(diff[0], diff[1])
            if d < min_dist:
                d = min_dist
            d_eff = d if attraction_cap is None else min(d, attraction_cap)
            mag = d_eff * d_eff / k
            if cfg.edge_weight_attraction:
                mag *= w
            fx, fy = mag * diff[0] / d, mag * diff[1] / d
            if movable[i]:
                disp[i, 0] += fx
                disp[i, 1] += fy
            if movable[j]:
                disp[j, 0] -= fx
                disp[j, 1] -= fy
        if anchor is not None:
            center, stiffness = anchor
            for j in range(n):
                if movable[j]:
                    disp[j] += stiffness * (center - pos[j])
        # cap displacement by the current temperature, then clamp to bounds
        max_disp = 0.0
        for j in range(n):
            if not movable[j]:
                continue
            d = math.hypot(disp[j, 0], disp[j, 1])
            if d > 0:
                step = min(d, temp)
                pos[j, 0] += disp[j, 0] / d * step
                pos[j, 1] += disp[j, 1] / d * step
                max_disp = max(max_disp, step)
            pos[j, 0] = min(max(pos[j, 0], x0), x1)
            pos[j, 1] = min(max(pos[j, 1], y0), y1)
        if on_iteration is not None:
            on_iteration(it, temp, max_disp)
    return pos


def fr_layout(
    qg: QuotientGraph, cfg: LayoutConfig | None = None, on_iteration=None
) -> Layout:
    """Lay out a quotient graph from scratch.

    Ideal distance k = sqrt(area / total members).  Initial positions are
    uniform in the bounds from ``cfg.seed``; iteration order is fixed and
    force accumulation is sequential, so results are reproducible bit-for-bit
    for a given (quotient, config).
    """
    cfg = cfg or LayoutConfig()
    ids = list(qg.cluster_ids)
    if not ids:
        raise LayoutError("cannot lay out an empty quotient graph")
    weights = np.array([count for _, count in qg.cluster_nodes], dtype=float)
    total = float(weights.sum())
    scale = _area_scale(int(total), cfg)
    x0, y0, x1, y1 = cfg.bounds
    if len(ids) == 1:
        cid = ids[0]
        return Layout(
            positions={cid: ((x0 + x1) / 2.0, (y0 + y1) / 2.0)},
            radii={cid: radius_for(int(weights[0]), scale)},
            bounds=cfg.bounds,
            seed=cfg.seed,
            area_scale=scale,
            iterations=cfg.iterations,
            initial_temperature=cfg.initial_temperature,
        )
    area = cfg.area if cfg.area > 0 else cfg.bounds_area
    k = math.sqrt(area / total)
    rng = np.random.default_rng(cfg.seed)
    pos = np.empty((len(ids), 2), dtype=float)
    pos[:, 0] = x0 + rng.random(len(ids)) * (x1 - x0)
    pos[:, 1] = y0 + rng.random(len(ids)) * (y1 - y0)
    index = {cid: i for i, cid in enumerate(ids)}
    edges = [
        (index[a], index[b], w) for (a, b), w in sorted(qg.weighted_edges.items())
    ]
    movable = np.ones(len(ids), dtype=bool)
    pos = _simulate(
        ids,
        pos,
        weights,
        edges,
        movable,
        k,
        cfg,
        cfg.bounds,
        t0=cfg.initial_temperature * cfg.diagonal,
        on_iteration=on_iteration,
    )
    positions = {cid: (float(pos[i, 0]), float(pos[i, 1])) for cid, i in index.items()}
    radii = {
        cid: radius_for(count, scale) for (cid, count) in qg.cluster_nodes
    }
    return Layout(
        positions=positions,
        radii=radii,
        bounds=cfg.bounds,
        seed=cfg.seed,
        area_scale=scale,
        iterations=cfg.iterations,
        initial_temperature=cfg.initial_temperature,
    )


def refine_layout(
    parent_layout: Layout,
    refined,
    children_qg: QuotientGraph,
    cfg: LayoutConfig | None = None,
    on_iteration=None,
) -> Layout:
    """Replace one laid-out cluster by its children, moving only them.

    Children start on a circle of half the parent radius around the parent
    position and interact with each other at the parent's local scale
    (k from the parent disk area); frozen neighbors keep their exact stored
    positions but still push and pull.  Attraction from far frozen nodes is
    evaluated at a capped distance so a remote neighbor cannot drag the
    children out of the slot; a weak spring anchors children to the parent
    position, and final containment keeps every child within 1.4 parent
    radii and the weighted centroid within 0.95, which guarantees the
    advertised drift bound whatever the surrounding graph looks like.
    """
    cfg = cfg or LayoutConfig()
    if refined not in parent_layout.positions:
        raise LayoutError(f"refined cluster {refined} has no position")
    parent_pos = np.array(parent_layout.positions[refined], dtype=float)
    parent_r = parent_layout.radii[refined]
    scale = parent_layout.area_scale

    ids = list(children_qg.cluster_ids)
    counts = dict(children_qg.cluster_nodes)
    children = [cid for cid in ids if cid not in parent_layout.positions]
    if not children:
        raise LayoutError("children quotient contains no new clusters")
    radii = dict(parent_layout.radii)
    del radii[refined]
    for cid in children:
        radii[cid] = radius_for(counts[cid], scale)
    positions = dict(parent_layout.positions)
    del positions[refined]

    if len(children) == 1:
        positions[children[0]] = (float(parent_pos[0]), float(parent_pos[1]))
        return Layout(
            positions=positions,
            radii=radii,
            bounds=parent_layout.bounds,
            seed=parent_layout.seed,
            area_scale=scale,
            iterations=cfg.iterations,
            initial_temperature=cfg.initial_temperature,
        )

    child_weight = sum(counts[cid] for cid in children)
    k_local = math.sqrt(math.pi * parent_r * parent_r / child_weight)
    index = {cid: i for i, cid in enumerate(ids)}
    pos = np.empty((len(ids), 2), dtype=float)
    movable = np.zeros(len(ids), dtype=bool)
    for cid in ids:
        i = index[cid]
        if cid in parent_layout.positions:
            pos[i] = parent_layout.positions[cid]
        else:
            movable[i] = True
    ring = parent_r / 2.0
    for j, cid in enumerate(sorted(children)):
        angle = 2.0 * math.pi * j / len(children)
        pos[index[cid]] = parent_pos + ring * np.array(
            [math.cos(angle), math.sin(angle)]
        )
    weights = np.array([counts[cid] for cid in ids], dtype=float)
    edges = [
        (index[a], index[b], w)
        for (a, b), w in sorted(children_qg.weighted_edges.items())
    ]
    pos = _simulate(
        ids,
        pos,
        weights,
        edges,
        movable,
        k_local,
        cfg,
        parent_layout.bounds,
        t0=0.5 * parent_r,
        anchor=(parent_pos, cfg.anchor_stiffness),
        attraction_cap=2.0 * k_local,
        on_iteration=on_iteration,
    )
    # containment: per-child cap, then recenter the weighted centroid
    child_idx = [index[cid] for cid in children]
    for i in child_idx:
        offset = pos[i] - parent_pos
        d = math.hypot(offset[0], offset[1])
        limit = 1.4 * parent_r
        if d > limit:
            pos[i] = parent_pos + offset * (limit / d)
    w = weights[child_idx]
    centroid = (pos[child_idx] * w[:, None]).sum(axis=0) / w.sum()
    drift = centroid - parent_pos
    dist = math.hypot(drift[0], drift[1])
    limit = 0.95 * parent_r
    if dist > limit:
        shift = drift * ((dist - limit) / dist)
        for i in child_idx:
            pos[i] -= shift
    for cid in children:
        i = index[cid]
        positions[cid] = (float(pos[i, 0]), float(pos[i, 1]))
    return Layout(
        positions=positions,
        radii=radii,
        bounds=parent_layout.bounds,
        seed=parent_layout.seed,
        area_scale=scale,
        iterations=cfg.iterations,
        initial_temperature=cfg.initial_temperature,
    )


def coarsen_layout(layout: Layout, merged_ids, new_id, sizes) -> Layout:
    """Collapse clusters to their size-weighted center of mass.

    ``sizes`` maps cluster id -> member count (weights for the centroid and
    the merged node's radius).  Every other position is carried over
    untouched.
    """
    merged_ids = tuple(merged_ids)
    if not merged_ids:
        raise LayoutError("nothing to merge")
    for cid in merged_ids:
        if cid not in layout.positions:
            raise LayoutError(f"cluster {cid} has no position")
        if cid not in sizes:
            raise LayoutError(f"cluster {cid} has no size")
    if new_id in layout.positions and new_id not in merged_ids:
        raise LayoutError(f"cluster id {new_id} already present")
    total = sum(sizes[cid] for cid in merged_ids)
    cx = sum(sizes[cid] * layout.positions[cid][0] for cid in merged_ids) / total
    cy = sum(sizes[cid] * layout.positions[cid][1] for cid in merged_ids) / total
    positions = {
        cid: p for cid, p in layout.positions.items() if cid not in merged_ids
    }
    radii = {cid: r for cid, r in layout.radii.items() if cid not in merged_ids}
    positions[new_id] = (cx, cy)
    radii[new_id] = radius_for(total, layout.area_scale)
    return Layout(
        positions=positions,
        radii=radii,
        bounds=layout.bounds,
        seed=layout.seed,
        area_scale=layout.area_scale,
        iterations=layout.iterations,
        initial_temperature=layout.initial_temperature,
    )


def pair_equilibrium_distance(w_i: float, w_j: float, k: float) -> float:
    """Separation where pair attraction balances mutual repulsion, solved
    numerically (bisection).  For equal weights this is k * w^(1/3).

    The net closing force at distance d on the pair axis is
    (w_i + w_j) k^2 / d  -  2 d^2 / k  (each node feels the other's
    repulsion and its own attraction); the root is the symmetric-equilibrium
    separation used as the test oracle.
    """
    def net(d: float) -> float:
        return (w_i + w_j) * k * k / d - 2.0 * d * d / k

    lo, hi = 1e-9 * k, 100.0 * k * max(w_i, w_j)
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if net(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0
