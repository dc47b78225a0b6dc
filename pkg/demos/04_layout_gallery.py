"""
Laying out the quotient graph
=============================

Clusters are drawn as disks whose area is proportional to their member
count, positioned by a force simulation: every disk repels every other in
proportion to its size, and aggregated inter-cluster edges pull their
endpoints together.  Refining a cluster replaces its disk by its children
without moving anything else; coarsening collapses disks onto their exact
size-weighted centroid.  The result here is written to an SVG you can open
in a browser.
"""

import math

from modview import (
    LayoutConfig,
    MaximizerConfig,
    build_hierarchy,
    coarsen_layout,
    fr_layout,
    initial_view,
    quotient_graph,
    refine_layout,
    refine_view,
    two_level_cliques,
)
from modview.documents import svg_document, view_document

g = two_level_cliques(num_groups=6, cliques_per_group=2, clique_size=5)
tree = build_hierarchy(g, cfg=MaximizerConfig(seed=0), trials=50, seed=1)
view = initial_view(tree, g)
qg = quotient_graph(g, tree.labels_for_frontier(view.frontier))

layout = fr_layout(qg, LayoutConfig(iterations=300, seed=1))
print(f"{len(layout.positions)} disks in bounds {layout.bounds}")

# The area law: pi r^2 is the same multiple of the member count everywhere.
scale = {c: math.pi * layout.radii[c] ** 2 / n for c, n in qg.cluster_nodes}
lo, hi = min(scale.values()), max(scale.values())
print(f"area per member: {lo:.6f} .. {hi:.6f}  (relative spread {(hi - lo) / lo:.2e})")

# Refine one cluster in place: its children start on a small ring inside
# the parent disk and settle locally while everything else stays frozen.
target = next(c for c in view.frontier if tree.node(c).children)
before = {c: layout.positions[c] for c in view.frontier if c != target}
view2 = refine_view(tree, g, view, target)
qg2 = quotient_graph(g, tree.labels_for_frontier(view2.frontier))
layout2 = refine_layout(layout, target, qg2, LayoutConfig(iterations=200, seed=1))
moved = [c for c, pt in before.items() if layout2.positions[c] != pt]
print(f"refined cluster {target}: frozen disks moved = {moved or 'none'}")

# Coarsen by hand: the merged disk sits exactly on the weighted centroid.
children = tree.node(target).children
sizes = {c: tree.node(c).size for c in children}
layout3 = coarsen_layout(layout2, children, target, sizes)
cx = sum(sizes[c] * layout2.positions[c][0] for c in children) / sum(sizes.values())
cy = sum(sizes[c] * layout2.positions[c][1] for c in children) / sum(sizes.values())
print(f"merged disk at {layout3.positions[target]}, centroid {(cx, cy)}")

# Export the refined scene as SVG.
doc = view_document(tree, view2, layout2, qg2)
out = "quotient-view.svg"
with open(out, "w") as fh:
    fh.write(svg_document(doc))
print(f"wrote {out}: {len(doc['nodes'])} circles, {len(doc['edges'])} lines")
