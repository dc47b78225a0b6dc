"""Newman modularity: evaluation, merge deltas, greedy maximization, and an
exhaustive small-instance optimum.

All modularity arithmetic is carried as exact integers (intra-cluster edge
counts and cluster degree sums) and converted to floating point only at the
final division:

    Q = intra/m - sum_c (d_c / 2m)^2  =  (4*m*intra - sum_c d_c^2) / (4*m^2)

so repeated delta updates cannot drift, and ties are exact integer ties.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph

BELL_ENUMERATION_LIMIT = 12


class ModularityError(ValueError):
    """Invalid modularity computation (edgeless graph, bad cluster ids...)."""


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to exactly one cluster, with its modularity.

    Cluster ids are dense ``0..k-1`` in order of first appearance by node id,
    which makes equal partitions compare equal and exports byte-stable.
    """

    assignment: tuple
    cluster_count: int
    modularity: float

    @classmethod
    def from_labels(cls, g: Graph, labels) -> "Partition":
        labels = canonical_labels(labels)
        if len(labels) != g.node_count:
            raise ModularityError("assignment must cover every node")
        k = (max(labels) + 1) if labels else 0
        return cls(assignment=labels, cluster_count=k, modularity=modularity(g, labels))

    def members_of(self, cluster_id: int):
        return tuple(i for i, c in enumerate(self.assignment) if c == cluster_id)

    def clusters(self):
        """Member tuples indexed by cluster id."""
        groups = [[] for _ in range(self.cluster_count)]
        for node, cid in enumerate(self.assignment):
            groups[cid].append(node)
        return tuple(tuple(gp) for gp in groups)


@dataclass(frozen=True)
class MaximizerConfig:
    seed: int = 0
    local_move_passes: int = 10
    tie_break: str = "lexicographic"

    def __post_init__(self):
        if self.tie_break != "lexicographic":
            raise ModularityError(f"unknown tie_break rule {self.tie_break!r}")
        if self.local_move_passes < 0:
            raise ModularityError("local_move_passes must be non-negative")


def canonical_labels(labels) -> tuple:
    """Relabel clusters densely in order of first appearance by node id."""
    remap: dict = {}
    out = []
    for lab in labels:
        if lab not in remap:
            remap[lab] = len(remap)
        out.append(remap[lab])
    return tuple(out)


def _assignment_of(p) -> tuple:
    return tuple(p.assignment) if isinstance(p, Partition) else tuple(p)


def modularity(g: Graph, p) -> float:
    """Newman modularity of a partition; requires at least one edge."""
    assignment = _assignment_of(p)
    if g.edge_count == 0:
        raise ModularityError("modularity is undefined for an edgeless graph")
    if len(assignment) != g.node_count:
        raise ModularityError("assignment must cover every node")
    m = g.edge_count
    intra = 0
    for u, v in g.edges:
        if assignment[u] == assignment[v]:
            intra += 1
    dsum: dict = {}
    for node, cid in enumerate(assignment):
        dsum[cid] = dsum.get(cid, 0) + g.degrees[node]
    sum_d2 = sum(d * d for d in dsum.values())
    return (4 * m * intra - sum_d2) / (4 * m * m)


def cluster_aggregates(g: Graph, p):
    """Exact per-cluster aggregates: (degree sums, intra edges, inter-pair edges).

    ``pair_edges`` maps ``(a, b)`` with ``a < b`` to the number of original
    edges between clusters a and b.  These are the cached quantities that make
    merge deltas O(1).
    """
    assignment = _assignment_of(p)
    dsum: dict = {}
    for node, cid in enumerate(assignment):
        dsum[cid] = dsum.get(cid, 0) + g.degrees[node]
    intra: dict = {cid: 0 for cid in dsum}
    pair_edges: dict = {}
    for u, v in g.edges:
        a, b = assignment[u], assignment[v]
        if a == b:
            intra[a] += 1
        else:
            key = (a, b) if a < b else (b, a)
            pair_edges[key] = pair_edges.get(key, 0) + 1
    return dsum, intra, pair_edges


def merge_delta(g: Graph, p, a: int, b: int, aggregates=None) -> float:
    """Modularity change from merging clusters ``a`` and ``b``:

        dQ = e_ab/m - 2 (d_a/2m)(d_b/2m)

    Pass precomputed ``cluster_aggregates`` to make repeated queries O(1).
    """
    if a == b:
        raise ModularityError("cannot merge a cluster with itself")
    dsum, _, pair_edges = aggregates if aggregates is not None else cluster_aggregates(g, p)
    if a not in dsum or b not in dsum:
        raise ModularityError(f"cluster id {a if a not in dsum else b} not in partition")
    m = g.edge_count
    e_ab = pair_edges.get((a, b) if a < b else (b, a), 0)
    return (2 * m * e_ab - dsum[a] * dsum[b]) / (2 * m * m)


class _MaximizerState:
    """Mutable cluster bookkeeping for the greedy maximizer.

    Keeps cluster degree sums, intra-edge counts, members, and the weighted
    cluster adjacency map exactly in sync through merges and node moves.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.m = g.edge_count
        n = g.node_count
        self.cluster_of = list(range(n))
        self.members = {i: [i] for i in range(n)}
        self.d = {i: g.degrees[i] for i in range(n)}
        self.intra = {i: 0 for i in range(n)}
        self.pair_e: dict = {}
        for u, v in g.edges:
            self.pair_e[(u, v)] = 1

    def _bump(self, a: int, b: int, delta: int):
        key = (a, b) if a < b else (b, a)
        val = self.pair_e.get(key, 0) + delta
        if val:
            self.pair_e[key] = val
        else:
            self.pair_e.pop(key, None)

    def best_merge(self):
        """Connected cluster pair with maximal dQ, ties to the smallest
        (min id, max id) pair; None when no merge is strictly improving.

        Comparison key is the exact integer ``2*m^2*dQ``, so iteration order
        cannot affect the result."""
        best_num = 0
        best_pair = None
        for (a, b), e in self.pair_e.items():
            num = 2 * self.m * e - self.d[a] * self.d[b]
            if num > best_num or (num == best_num and best_pair is not None and (a, b) < best_pair):
                best_num = num
                best_pair = (a, b)
        return best_pair

    def merge(self, a: int, b: int):
        """Absorb cluster ``b`` into ``a``."""
        e_ab = self.pair_e.pop((a, b) if a < b else (b, a), 0)
        neighbors_b = [
            (x if y == b else y)
            for (x, y) in list(self.pair_e)
            if x == b or y == b
        ]
        for c in neighbors_b:
            key = (b, c) if b < c else (c, b)
            w = self.pair_e.pop(key)
            self._bump(a, c, w)
        self.intra[a] += self.intra.pop(b) + e_ab
        self.d[a] += self.d.pop(b)
        for node in self.members[b]:
            self.cluster_of[node] = a
        self.members[a].extend(self.members.pop(b))

    def move(self, node: int, target: int, counts: dict):
        """Relocate ``node`` to cluster ``target``; ``counts`` maps neighbor
        clusters to the node's edge counts into them."""
        c = self.cluster_of[node]
        ki_c = counts.get(c, 0)
        ki_t = counts.get(target, 0)
        for u, k in counts.items():
            if u == c or u == target:
                continue
            self._bump(c, u, -k)
            self._bump(target, u, k)
        if ki_t:
            self._bump(c, target, -ki_t)
        if ki_c:
            self._bump(c, target, ki_c)
        deg = self.g.degrees[node]
        self.d[c] -= deg
        self.d[target] += deg
        self.intra[c] -= ki_c
        self.intra[target] += ki_t
        self.members[c].remove(node)
        self.members[target].append(node)
        self.cluster_of[node] = target
        if not self.members[c]:
            del self.members[c], self.d[c], self.intra[c]

    def modularity_numerator(self) -> int:
        """Exact ``4*m^2*Q`` for the current clustering."""
        intra_total = sum(self.intra.values())
        sum_d2 = sum(d * d for d in self.d.values())
        return 4 * self.m * intra_total - sum_d2


def _merge_phase(state: _MaximizerState) -> bool:
    changed = False
    while True:
        pair = state.best_merge()
        if pair is None:
            return changed
        state.merge(*pair)
        changed = True


def _local_move_phase(state: _MaximizerState, rng: random.Random, max_passes: int) -> bool:
    g = state.g
    m = state.m
    changed = False
    for _ in range(max_passes):
        moved = False
        order = list(range(g.node_count))
        rng.shuffle(order)
        for node in order:
            neigh = g.adjacency[node]
            if not neigh:
                continue
            counts: dict = {}
            for nb in neigh:
                cid = state.cluster_of[nb]
                counts[cid] = counts.get(cid, 0) + 1
            c = state.cluster_of[node]
            ki_c = counts.get(c, 0)
            deg = g.degrees[node]
            d_c_rest = state.d[c] - deg
            best_num = 0
            best_target = None
            for t, ki_t in counts.items():
                if t == c:
                    continue
                # exact 2*m^2 * dQ for moving node from c to t
                num = 2 * m * (ki_t - ki_c) - deg * (state.d[t] - d_c_rest)
                if num > best_num or (num == best_num and best_target is not None and t < best_target):
                    best_num = num
                    best_target = t
            if best_target is not None:
                state.move(node, best_target, counts)
                moved = True
        if moved:
            changed = True
        else:
            break
    return changed


def greedy_maximize(g: Graph, cfg: MaximizerConfig | None = None) -> Partition:
    """Greedy agglomerative modularity maximization with local-move refinement.

    Starts from singletons and repeatedly applies the merge with the best
    (strictly positive) dQ, then relocates single nodes to the neighboring
    cluster with the best dQ; the two phases alternate until neither can
    improve.  At termination no single merge and no single node move improves
    Q.  Deterministic for a fixed seed and tie-break rule.
    """
    if g.edge_count == 0:
        raise ModularityError("cannot cluster an edgeless graph")
    cfg = cfg or MaximizerConfig()
    state = _MaximizerState(g)
    rng = random.Random(cfg.seed)
    while True:
        _merge_phase(state)
        moved = _local_move_phase(state, rng, cfg.local_move_passes)
        if not moved:
            # merge phase ran to exhaustion and moves changed nothing after
            # it, so no single merge or move can improve Q here
            break
    labels = canonical_labels(state.cluster_of)
    q = state.modularity_numerator() / (4 * state.m * state.m)
    return Partition(assignment=labels, cluster_count=max(labels) + 1, modularity=q)


def brute_force_optimal(g: Graph):
    """Globally optimal partition by enumerating all set partitions.

    Refuses graphs with more than 12 nodes (Bell-number blowup).  Ties are
    broken toward fewer clusters, then the lexicographically smallest
    canonical assignment.
    """
    n = g.node_count
    if n > BELL_ENUMERATION_LIMIT:
        raise ModularityError(
            f"brute force enumeration limited to {BELL_ENUMERATION_LIMIT} nodes, got {n}"
        )
    if g.edge_count == 0:
        raise ModularityError("modularity is undefined for an edgeless graph")
    m = g.edge_count
    degrees = g.degrees
    adjacency = g.adjacency
    labels = [0] * n
    dsum = [0] * (n + 1)
    best = {"num": None, "k": None, "labels": None}

    def recurse(i: int, next_label: int, intra: int, sum_d2: int):
        if i == n:
            num = 4 * m * intra - sum_d2
            if (
                best["num"] is None
                or num > best["num"]
                or (num == best["num"] and next_label < best["k"])
            ):
                best["num"] = num
                best["k"] = next_label
                best["labels"] = labels.copy()
            return
        counts: dict = {}
        for j in adjacency[i]:
            if j < i:
                cj = labels[j]
                counts[cj] = counts.get(cj, 0) + 1
        deg = degrees[i]
        for c in range(next_label + 1):
            old = dsum[c]
            labels[i] = c
            dsum[c] = old + deg
            recurse(
                i + 1,
                next_label + (1 if c == next_label else 0),
                intra + counts.get(c, 0),
                sum_d2 - old * old + (old + deg) * (old + deg),
            )
            dsum[c] = old

    recurse(0, 0, 0, 0)
    q = best["num"] / (4 * m * m)
    return Partition(
        assignment=tuple(best["labels"]), cluster_count=best["k"], modularity=q
    )


def partition_to_tsv(g: Graph, p: Partition) -> str:
    """One ``token<TAB>cluster_id`` line per node, with Q in a header comment."""
    lines = [f"# Q={p.modularity!r}", f"# clusters={p.cluster_count}"]
    for node in range(g.node_count):
        lines.append(f"{g.tokens[node]}\t{p.assignment[node]}")
    return "\n".join(lines) + "\n"


def partition_from_tsv(text: str, g: Graph) -> Partition:
    """Parse a partition export back against the graph it was made from."""
    by_token: dict = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        token, _, cid = line.partition("\t")
        by_token[token] = int(cid)
    missing = [t for t in g.tokens if t not in by_token]
    if missing:
        raise ModularityError(f"partition file misses nodes: {missing[:5]}")
    labels = [by_token[t] for t in g.tokens]
    return Partition.from_labels(g, labels)
