"""
Is the best partition better than chance?
=========================================

Every graph has a maximal-modularity partition, including pure noise, so a
high Q on its own proves nothing.  The significance gate re-runs the same
maximizer on degree-preserving random rewirings of the input (the
configuration model, sampled by double edge swaps) and keeps a partition
only if its Q beats every null value with a small Monte Carlo p-value.
"""

from modview import (
    MaximizerConfig,
    effective_alpha,
    gnp_random_graph,
    greedy_maximize,
    is_significant,
    null_distribution,
    p_value,
    planted_cliques,
)

TRIALS = 50


def report(name, g, seed):
    cfg = MaximizerConfig(seed=seed)
    best = greedy_maximize(g, cfg)
    nd = null_distribution(g, trials=TRIALS, cfg=cfg, seed=seed)
    p = p_value(nd, best.modularity)
    verdict = is_significant(nd, best.modularity, alpha=0.01)
    print(f"{name}: n={g.node_count} m={g.edge_count}")
    print(f"  observed Q        = {best.modularity:.4f}")
    print(f"  null max (gate)   = {nd.threshold:.4f} over {nd.trials} trials")
    print(f"  add-one p-value   = {p:.4f}  (floor {effective_alpha(nd, 0.01):.4f})")
    print(f"  significant       = {verdict}")
    print()


# Four 5-cliques on a bridge cycle: strong planted structure.  The observed
# Q clears the largest null value by a wide margin and the p-value bottoms
# out at 1/(trials+1).
report("planted cliques", planted_cliques(4, 5), seed=1)

# A dense Erdos-Renyi graph has no communities, yet the maximizer still
# reports Q around 0.1 to 0.2.  The null distribution reaches the same
# values, so the gate correctly refuses to call it structure.
report("dense G(60, 0.5)", gnp_random_graph(60, 0.5, seed=17), seed=1)
