"""
Growing and walking the cluster tree
====================================

The best partition is only one level of description.  Below it, each
cluster's induced subgraph can hide further significant structure; above
it, least-loss merges give coarser summaries that stay over the global
significance threshold.  Both directions live in one tree, and a "view" is
any antichain of that tree covering all nodes.

The fixture exploits the resolution limit of modularity: twelve groups of
two bridged 5-cliques.  At the global scale the maximizer sees the groups;
each group's own subgraph splits significantly into its two cliques.
"""

from modview import (
    MaximizerConfig,
    build_hierarchy,
    coarsen_view,
    initial_view,
    refine_view,
    two_level_cliques,
)

g = two_level_cliques(num_groups=12, cliques_per_group=2, clique_size=5)
print(f"graph: {g.node_count} nodes, {g.edge_count} edges")

tree = build_hierarchy(g, cfg=MaximizerConfig(seed=0), trials=50, seed=1)
print(f"best level: {len(tree.best_level)} clusters, Q = {tree.global_q:.4f}")
print(f"global threshold (null max) = {tree.global_threshold:.4f}, p = {tree.global_p:.4f}")
print(f"coarse chain: {len(tree.coarse_chain)} merges stay significant")
print(f"checked refinement frontier: {len(tree.checked_frontier)} clusters")
print()

# Every cluster documents why exploration stops or continues there.
statuses = {}
for node in tree.nodes.values():
    statuses[node.status] = statuses.get(node.status, 0) + 1
print("node statuses:", dict(sorted(statuses.items())))
print()

# A view starts at the best level and moves by refine / coarsen.  Both are
# exact inverses on the frontier.
view = initial_view(tree, g)
print(f"initial frontier: {len(view.frontier)} clusters, induced Q = {view.induced_q:.4f}")

target = next(c for c in view.frontier if tree.node(c).children)
children = tree.node(target).children
print(f"refining cluster {target} (size {tree.node(target).size}) "
      f"into {len(children)} sub-clusters")
view = refine_view(tree, g, view, target)
print(f"  frontier now {len(view.frontier)} clusters, induced Q = {view.induced_q:.4f}")

view = coarsen_view(tree, g, view, target)
print(f"coarsened back: {len(view.frontier)} clusters, induced Q = {view.induced_q:.4f}")
print()

# Walking the coarse chain upward trades modularity for brevity; the chain
# stops before any merge would drop below the threshold.
for left, right, merged, q_after in (
    (s.left, s.right, s.merged, s.q_after) for s in tree.coarse_chain[:3]
):
    print(f"merge {left} + {right} -> {merged}: Q after = {q_after:.4f}")
