"""Deterministic export documents: view JSON, hierarchy JSON, SVG, TSV.

Serialization is byte-stable: keys are sorted, floats use shortest
round-trip repr, nothing carries timestamps, and node/edge lists follow a
fixed id order.  Two runs with the same seeds therefore produce identical
bytes, which the tests pin.
"""

from __future__ import annotations

import json
import math

from .graph import Graph, QuotientGraph
from .hierarchy import ClusterTree, ViewState
from .layout import Layout
from .stats import AttributeStats

VIEW_SCALE_FOR_MODE = {"p": "gray-sequential", "residual": "red-blue-diverging"}


class DocumentError(ValueError):
    pass


def dumps(doc) -> str:
    """Canonical JSON text (sorted keys, compact, trailing newline)."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def frontier_dense_map(tree: ClusterTree, frontier) -> dict:
    """tree node id -> dense cluster id, matching Partition.from_labels on
    the frontier's label vector (first appearance by graph node id)."""
    labels = tree.labels_for_frontier(frontier)
    dense: dict = {}
    for lab in labels:
        if lab not in dense:
            dense[lab] = len(dense)
    return dense


def color_values(
    tree: ClusterTree, frontier, stats: AttributeStats | None, mode: str, category: str | None
) -> dict:
    """Per-frontier-node color number for the requested stat mode."""
    if stats is None:
        return {cid: None for cid in frontier}
    dense = frontier_dense_map(tree, frontier)
    out = {}
    for cid in frontier:
        cs = stats.cluster(dense[cid])
        if mode == "p":
            out[cid] = cs.p
        elif mode == "residual":
            if category is None:
                raise DocumentError("residual mode requires a category")
            if category not in cs.residuals:
                raise DocumentError(f"category {category!r} not retained")
            out[cid] = cs.residuals[category]
        else:
            raise DocumentError(f"unknown stat mode {mode!r}")
    return out


def view_document(
    tree: ClusterTree,
    view: ViewState,
    layout: Layout,
    qg: QuotientGraph,
    stats: AttributeStats | None = None,
    mode: str = "p",
    category: str | None = None,
) -> dict:
    """The wire document for one view: geometry, quotient edges, flags,
    color numbers (presentation-neutral), and the global significance
    context."""
    colors = color_values(tree, view.frontier, stats, mode, category)
    sizes = dict(qg.cluster_nodes)
    nodes = []
    for cid in view.frontier:
        node = tree.node(cid)
        x, y = layout.position_of(cid)
        nodes.append(
            {
                "id": cid,
                "x": x,
                "y": y,
                "radius": layout.radii[cid],
                "size": sizes[cid],
                "refinable": bool(node.children),
                "coarsenable": node.parent is not None,
                "color": colors[cid],
            }
        )
    edges = [
        {"source": a, "target": b, "weight": w}
        for (a, b), w in sorted(qg.weighted_edges.items())
    ]
    stat_block = None
    if stats is not None:
        stat_block = {
            "attribute": stats.attribute,
            "mode": mode,
            "category": category,
            "scale": VIEW_SCALE_FOR_MODE[mode],
        }
    return {
        "nodes": nodes,
        "edges": edges,
        "q": view.induced_q,
        "threshold": tree.global_threshold,
        "no_structure": tree.no_structure,
        "stat": stat_block,
        "bounds": list(layout.bounds),
    }


def hierarchy_document(tree: ClusterTree) -> dict:
    nodes = []
    for nid in sorted(tree.nodes):
        node = tree.nodes[nid]
        nodes.append(
            {
                "id": node.id,
                "size": node.size,
                "members": list(node.members),
                "parent": node.parent,
                "children": list(node.children),
                "status": node.status,
                "local_q": node.local_q,
                "local_p": node.local_p,
                "local_threshold": node.local_threshold,
            }
        )
    return {
        "nodes": nodes,
        "best_level": list(tree.best_level),
        "roots": list(tree.roots),
        "checked_frontier": list(tree.checked_frontier),
        "coarse_chain": [
            {"left": s.left, "right": s.right, "merged": s.merged, "q_after": s.q_after}
            for s in tree.coarse_chain
        ],
        "global": {
            "q": tree.global_q,
            "p": tree.global_p,
            "threshold": tree.global_threshold,
            "no_structure": tree.no_structure,
            "trials": tree.trials,
            "alpha": tree.alpha,
            "seed": tree.seed,
            "strict_levels": tree.strict_levels,
        },
        "node_count": tree.node_count,
    }


def _gray_for_p(p: float) -> str:
    """Sequential ramp: small p -> dark.  Linear in -log10(p), clipped."""
    if p <= 0:
        level = 0.0
    else:
        level = max(0.0, 1.0 - min(-math.log10(p), 3.0) / 3.0)
    v = int(round(40 + 200 * level))
    return f"rgb({v},{v},{v})"


def _diverging_for_residual(r: float, limit: float = 3.0) -> str:
    """Red for positive residuals, blue for negative, white at zero."""
    t = max(-1.0, min(1.0, r / limit))
    if t >= 0:
        other = int(round(255 * (1.0 - t)))
        return f"rgb(255,{other},{other})"
    other = int(round(255 * (1.0 + t)))
    return f"rgb({other},{other},255)"


def svg_document(
    view_doc: dict,
    stroke: str = "#666666",
    default_fill: str = "#c8c8c8",
) -> str:
    """SVG scene for a view document: one line per quotient edge, one circle
    per frontier cluster, inside the layout's viewbox."""
    x0, y0, x1, y1 = view_doc["bounds"]
    width, height = x1 - x0, y1 - y0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:g} {y0:g} {width:g} {height:g}">',
    ]
    pos = {n["id"]: (n["x"], n["y"]) for n in view_doc["nodes"]}
    for e in view_doc["edges"]:
        (xa, ya), (xb, yb) = pos[e["source"]], pos[e["target"]]
        w = min(1.0 + 0.5 * (e["weight"] - 1), 6.0)
        lines.append(
            f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" '
            f'stroke="{stroke}" stroke-width="{w:.2f}"/>'
        )
    mode = (view_doc.get("stat") or {}).get("mode")
    for n in view_doc["nodes"]:
        if n["color"] is None:
            fill = default_fill
        elif mode == "residual":
            fill = _diverging_for_residual(n["color"])
        else:
            fill = _gray_for_p(n["color"])
        lines.append(
            f'<circle cx="{n["x"]:.3f}" cy="{n["y"]:.3f}" r="{n["radius"]:.3f}" '
            f'fill="{fill}" stroke="#333333">'
            f'<title>cluster {n["id"]} (size {n["size"]})</title></circle>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def layout_document(layout: Layout, qg: QuotientGraph) -> dict:
    sizes = dict(qg.cluster_nodes)
    return {
        "nodes": [
            {
                "id": cid,
                "x": layout.positions[cid][0],
                "y": layout.positions[cid][1],
                "radius": layout.radii[cid],
                "size": sizes[cid],
            }
            for cid in sorted(layout.positions)
        ],
        "edges": [
            {"source": a, "target": b, "weight": w}
            for (a, b), w in sorted(qg.weighted_edges.items())
        ],
        "bounds": list(layout.bounds),
        "seed": layout.seed,
    }
