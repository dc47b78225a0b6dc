"""Significance-gated cluster tree and view-frontier navigation.

The tree unifies two directions of structure around the best partition:

* below it, refinement sub-levels: each cluster is re-clustered on its
  induced subgraph (inter-cluster edges discarded) and the split is kept
  only when two checks pass -- (a) the sub-partition beats the subgraph's
  own configuration null, and (b) substituting the children into the
  current full-graph level keeps full-graph modularity at or above the
  global threshold;
* above it, a coarse chain of greedy least-loss merges, cut off before any
  merge would drop modularity below the global threshold.

A view is an antichain of tree nodes covering the whole graph (a frontier);
refine and coarsen are mutually inverse frontier moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .graph import Graph, induced_subgraph
from .modularity import (
    MaximizerConfig,
    Partition,
    cluster_aggregates,
    greedy_maximize,
    merge_delta,
    modularity,
)
from .significance import (
    DEFAULT_ALPHA,
    DEFAULT_TRIALS,
    NullDistribution,
    derive_seed,
    is_significant,
    null_distribution,
    p_value,
)

# Sub-null trial counts never drop below this; tiny Monte Carlo runs make the
# add-one p-value useless.
MIN_SUB_TRIALS = 25
# Clusters smaller than this are terminal without testing: configuration
# nulls on 2-3 node degree sequences are degenerate.
MIN_REFINE_SIZE = 4

STATUS_REFINED = "refined"
STATUS_REFINED_EXEMPT = "refined_exempt"
STATUS_TERMINAL = "terminal"
STATUS_COARSE = "coarse"


class HierarchyError(ValueError):
    pass


@dataclass
class ClusterNode:
    """One cluster in the tree.

    ``members`` are original graph node ids.  ``local_q``/``local_p`` record
    the sub-partition test on this node's induced subgraph when one ran
    (None otherwise); ``local_threshold`` is that test's null maximum.
    """

    id: int
    members: tuple
    parent: int | None = None
    children: tuple = ()
    local_q: float | None = None
    local_p: float | None = None
    local_threshold: float | None = None
    status: str = STATUS_TERMINAL

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MergeStep:
    """One coarse-chain merge: ``left``+``right`` -> ``merged``, with the
    full-graph modularity after the merge."""

    left: int
    right: int
    merged: int
    q_after: float


@dataclass
class ClusterTree:
    """Cluster hierarchy around the best partition of one graph.

    ``best_level`` is the antichain of node ids matching the best partition
    (cluster id i of the partition is tree node i).  ``roots`` is the top
    antichain after coarse merges.  ``checked_frontier`` is the deepest
    refinement level whose induced full-graph partition was verified to stay
    at or above ``global_threshold`` (exempt bottom splits sit below it).
    """

    node_count: int
    nodes: dict = field(default_factory=dict)
    best_level: tuple = ()
    roots: tuple = ()
    coarse_chain: tuple = ()
    checked_frontier: tuple = ()
    global_q: float = 0.0
    global_p: float = 1.0
    global_threshold: float = 0.0
    no_structure: bool = False
    trials: int = DEFAULT_TRIALS
    alpha: float = DEFAULT_ALPHA
    seed: int = 0
    strict_levels: bool = False

    def node(self, node_id: int) -> ClusterNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise HierarchyError(f"no cluster with id {node_id}") from None

    def _add(self, node: ClusterNode) -> ClusterNode:
        if node.id in self.nodes:
            raise HierarchyError(f"duplicate cluster id {node.id}")
        self.nodes[node.id] = node
        return node

    def labels_for_frontier(self, frontier) -> tuple:
        """Dense cluster labels (indexed by graph node) for an antichain."""
        labels = [-1] * self.node_count
        for cid in frontier:
            for v in self.node(cid).members:
                if labels[v] != -1:
                    raise HierarchyError("frontier clusters overlap")
                labels[v] = cid
        if any(lab == -1 for lab in labels):
            raise HierarchyError("frontier does not cover the graph")
        return tuple(labels)

    def validate(self) -> None:
        """Check tree well-formedness; raises on violation."""
        for node in self.nodes.values():
            if node.children:
                child_members = []
                for c in node.children:
                    child = self.node(c)
                    if child.parent != node.id:
                        raise HierarchyError(
                            f"child {c} does not point back to parent {node.id}"
                        )
                    child_members.extend(child.members)
                if sorted(child_members) != sorted(node.members):
                    raise HierarchyError(
                        f"children of {node.id} do not partition its members"
                    )
        for frontier in (self.best_level, self.roots, self.checked_frontier):
            if frontier:
                self.labels_for_frontier(frontier)

    def leaves(self) -> tuple:
        return tuple(
            sorted(nid for nid, node in self.nodes.items() if not node.children)
        )


@dataclass(frozen=True)
class RefinementDecision:
    """Outcome of one refine_cluster call."""

    node: int
    accepted: bool
    exempt: bool
    reason: str
    sub_q: float | None = None
    sub_p: float | None = None
    sub_threshold: float | None = None
    children: tuple = ()


@dataclass(frozen=True)
class ViewState:
    """A rendered level: an antichain covering the graph plus its induced
    partition and modularity."""

    frontier: tuple
    induced_partition: Partition
    induced_q: float


def view_from_frontier(tree: ClusterTree, g: Graph, frontier) -> ViewState:
    frontier = tuple(sorted(frontier))
    labels = tree.labels_for_frontier(frontier)
    part = Partition.from_labels(g, labels)
    return ViewState(frontier=frontier, induced_partition=part, induced_q=part.modularity)


def initial_view(tree: ClusterTree, g: Graph) -> ViewState:
    return view_from_frontier(tree, g, tree.best_level)


def _terminal(node: ClusterNode, nd_stats=None) -> RefinementDecision:
    node.status = STATUS_TERMINAL
    kwargs = {}
    if nd_stats is not None:
        node.local_q, node.local_p, node.local_threshold = nd_stats
        kwargs = dict(sub_q=nd_stats[0], sub_p=nd_stats[1], sub_threshold=nd_stats[2])
    return RefinementDecision(node=node.id, accepted=False, exempt=False,
                              reason="no_significant_substructure", **kwargs)


def refine_cluster(
    tree: ClusterTree,
    node_id: int,
    g: Graph,
    trials: int | None = None,
    seed: int | None = None,
    cfg: MaximizerConfig | None = None,
) -> RefinementDecision:
    """Test one childless cluster for significant substructure and, on
    acceptance, attach the sub-clusters as children.

    The subgraph induced by the cluster is clustered in isolation and the
    result must (a) clear the subgraph's own configuration null and (b),
    substituted into the deepest checked full-graph level, keep modularity
    at or above the global threshold.  A split failing only (b) is still
    attached when ``strict_levels`` is off, but as an exempt bottom level:
    its children are terminal and the checked level does not descend.
    """
    node = tree.node(node_id)
    if node.children:
        raise HierarchyError(f"cluster {node_id} already has children")
    trials = max(tree.trials if trials is None else trials, MIN_SUB_TRIALS)
    seed = tree.seed if seed is None else seed
    cfg = cfg or MaximizerConfig()

    if node.size < MIN_REFINE_SIZE:
        return _terminal(node)
    sub = induced_subgraph(g, node.members)
    if sub.edge_count == 0:
        return _terminal(node)

    sub_part = greedy_maximize(sub, cfg)
    if sub_part.cluster_count < 2:
        return _terminal(node)
    sub_seed = derive_seed(seed, "refine", node_id)
    nd = null_distribution(sub, trials=trials, cfg=cfg, seed=sub_seed)
    sub_p = p_value(nd, sub_part.modularity)
    nd_stats = (sub_part.modularity, sub_p, nd.threshold)
    if not is_significant(nd, sub_part.modularity, tree.alpha):
        return _terminal(node, nd_stats)

    # Check (b): substitute the children into the deepest checked level.
    base = list(tree.labels_for_frontier(tree.checked_frontier))
    next_id = max(tree.nodes) + 1
    for local, v in enumerate(node.members):
        base[v] = next_id + sub_part.assignment[local]
    q_new = modularity(g, base)
    level_ok = q_new >= tree.global_threshold
    if not level_ok and tree.strict_levels:
        node.status = STATUS_TERMINAL
        node.local_q, node.local_p, node.local_threshold = nd_stats
        return RefinementDecision(
            node=node_id, accepted=False, exempt=False, reason="level_bound",
            sub_q=nd_stats[0], sub_p=nd_stats[1], sub_threshold=nd_stats[2],
        )

    children = []
    for cid, members_local in enumerate(sub_part.clusters()):
        members = tuple(node.members[i] for i in members_local)
        children.append(
            tree._add(ClusterNode(id=next_id + cid, members=members, parent=node_id))
        )
    node.children = tuple(child.id for child in children)
    node.local_q, node.local_p, node.local_threshold = nd_stats
    if level_ok:
        node.status = STATUS_REFINED
        frontier = [c for c in tree.checked_frontier if c != node_id]
        frontier.extend(node.children)
        tree.checked_frontier = tuple(sorted(frontier))
    else:
        node.status = STATUS_REFINED_EXEMPT
    return RefinementDecision(
        node=node_id, accepted=True, exempt=not level_ok,
        reason=STATUS_REFINED if level_ok else STATUS_REFINED_EXEMPT,
        sub_q=nd_stats[0], sub_p=nd_stats[1], sub_threshold=nd_stats[2],
        children=node.children,
    )


def coarsen_chain(g: Graph, best: Partition, threshold: float) -> tuple:
    """Greedy least-loss merge chain above the best partition.

    Repeatedly merges the edge-connected cluster pair with maximal merge
    delta (all deltas are <= 0 at the optimum, so this loses the least
    modularity), stopping before any merge that would land below
    ``threshold``.  Returns ``(steps, memberships)`` where ``steps`` is a
    tuple of ``(left, right, q_after)`` over *chain-local* cluster ids: ids
    ``0..k-1`` are best-partition clusters and each merge creates id
    ``k+step_index``.  ``memberships`` maps each created id to the best-level
    ids it absorbed.
    """
    m = g.edge_count
    dsum, intra, pair_edges = cluster_aggregates(g, best)
    dsum = dict(dsum)
    pair_edges = dict(pair_edges)
    intra_total = sum(intra.values())
    sum_d2 = sum(d * d for d in dsum.values())
    next_id = best.cluster_count
    absorbed = {cid: (cid,) for cid in range(best.cluster_count)}
    steps = []
    memberships = {}
    while len(dsum) > 1:
        best_key = None
        best_pair = None
        for (a, b), e_ab in sorted(pair_edges.items()):
            if e_ab == 0:
                continue
            # 2 m^2 * dQ, exact in integers
            num = 2 * m * e_ab - dsum[a] * dsum[b]
            key = (num, -a, -b)
            if best_key is None or key > best_key:
                best_key = key
                best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair
        intra_total += pair_edges[(a, b)]
        sum_d2 += 2 * dsum[a] * dsum[b]
        q_after_num = 4 * m * intra_total - sum_d2
        q_after = q_after_num / (4 * m * m)
        if q_after < threshold:
            break
        merged = next_id
        next_id += 1
        dsum[merged] = dsum.pop(a) + dsum.pop(b)
        new_pairs = {}
        for (x, y), e in pair_edges.items():
            if (x, y) == (a, b):
                continue
            x = merged if x in (a, b) else x
            y = merged if y in (a, b) else y
            if x == y:
                continue
            key = (x, y) if x < y else (y, x)
            new_pairs[key] = new_pairs.get(key, 0) + e
        pair_edges = new_pairs
        memberships[merged] = absorbed[a] + absorbed[b]
        absorbed[merged] = memberships[merged]
        del absorbed[a], absorbed[b]
        steps.append((a, b, q_after))
    return tuple(steps), memberships


def build_hierarchy(
    g: Graph,
    cfg: MaximizerConfig | None = None,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    alpha: float = DEFAULT_ALPHA,
    strict_levels: bool = False,
) -> ClusterTree:
    """Cluster the graph, gate the result on its configuration null, then
    grow the tree: breadth-first refinement below the best level and the
    greedy coarse chain above it.

    All randomness descends from ``seed``: the full-graph null uses it
    directly and each cluster's sub-null uses a seed derived from
    ``(seed, "refine", cluster_id)``, so rebuilding is reproducible
    regardless of traversal or parallelism.
    """
    if g.edge_count == 0:
        raise HierarchyError("cannot build a hierarchy for an edgeless graph")
    cfg = cfg or MaximizerConfig()
    best = greedy_maximize(g, cfg)
    nd = null_distribution(g, trials=trials, cfg=cfg, seed=seed)
    tree = ClusterTree(
        node_count=g.node_count,
        global_q=best.modularity,
        global_p=p_value(nd, best.modularity),
        global_threshold=nd.threshold,
        trials=trials,
        alpha=alpha,
        seed=seed,
        strict_levels=strict_levels,
    )
    significant = best.cluster_count > 1 and is_significant(nd, best.modularity, alpha)
    if not significant:
        root = tree._add(ClusterNode(id=0, members=tuple(range(g.node_count))))
        tree.no_structure = True
        tree.best_level = (0,)
        tree.roots = (0,)
        tree.checked_frontier = (0,)
        return tree

    for cid, members in enumerate(best.clusters()):
        tree._add(ClusterNode(id=cid, members=members))
    tree.best_level = tuple(range(best.cluster_count))
    tree.checked_frontier = tree.best_level

    # Coarse chain first: its node ids extend the best-level ids upward.
    steps, memberships = coarsen_chain(g, best, nd.threshold)
    chain = []
    for local_a, local_b, q_after in steps:
        merged_local = best.cluster_count + len(chain)
        members = []
        for src in memberships[merged_local]:
            members.extend(tree.node(src).members)
        node = tree._add(
            ClusterNode(
                id=merged_local,
                members=tuple(sorted(members)),
                children=(local_a, local_b),
                status=STATUS_COARSE,
            )
        )
        tree.node(local_a).parent = node.id
        tree.node(local_b).parent = node.id
        chain.append(MergeStep(left=local_a, right=local_b, merged=node.id, q_after=q_after))
    tree.coarse_chain = tuple(chain)
    tree.roots = tuple(sorted(nid for nid, node in tree.nodes.items() if node.parent is None))

    # Breadth-first refinement below the best level.
    queue = list(tree.best_level)
    while queue:
        node_id = queue.pop(0)
        decision = refine_cluster(tree, node_id, g, trials=trials, seed=seed, cfg=cfg)
        if decision.accepted and not decision.exempt:
            queue.extend(decision.children)
    return tree


def refine_view(tree: ClusterTree, g: Graph, v: ViewState, node_id: int) -> ViewState:
    """Replace a frontier cluster by its children."""
    if node_id not in v.frontier:
        raise HierarchyError(f"cluster {node_id} is not in the current view")
    node = tree.node(node_id)
    if not node.children:
        raise HierarchyError(f"cluster {node_id} has no significant substructure")
    frontier = [c for c in v.frontier if c != node_id]
    frontier.extend(node.children)
    return view_from_frontier(tree, g, frontier)


def coarsen_view(tree: ClusterTree, g: Graph, v: ViewState, parent_id: int) -> ViewState:
    """Replace all children of ``parent_id`` in the frontier by the parent."""
    parent = tree.node(parent_id)
    if not parent.children:
        raise HierarchyError(f"cluster {parent_id} is not a merge target")
    missing = [c for c in parent.children if c not in v.frontier]
    if missing:
        raise HierarchyError(
            f"cannot coarsen into {parent_id}: children {missing} not all in view"
        )
    frontier = [c for c in v.frontier if c not in parent.children]
    frontier.append(parent_id)
    return view_from_frontier(tree, g, frontier)


def coarsen_target(tree: ClusterTree, v: ViewState, node_id: int) -> int:
    """Parent id a view cluster would coarsen into; errors at the boundary."""
    node = tree.node(node_id)
    if node.parent is None:
        raise HierarchyError(f"cluster {node_id} is at the significance boundary")
    return node.parent


def next_coarse_step(tree: ClusterTree, v: ViewState) -> int:
    """The next applicable coarse-chain merge for this view (its merged id).

    Scans the chain in order for the first step whose children are both in
    the frontier.  Errors when the view is already at the top of the chain.
    """
    for step in tree.coarse_chain:
        if step.left in v.frontier and step.right in v.frontier:
            return step.merged
    raise HierarchyError("view is at the significance boundary")
