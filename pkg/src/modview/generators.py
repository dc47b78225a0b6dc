"""Synthetic graph generators for fixtures, demos, and calibration tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def barbell_cliques(clique_size: int = 3) -> Graph:
    """Two k-cliques joined by a single bridge edge.

    With k=3 this is the classic 6-node barbell: triangles {0,1,2} and
    {3,4,5} bridged by (2,3), degree sequence (2,2,3,3,2,2).
    """
    k = clique_size
    edges = []
    for block in (0, k):
        for i in range(k):
            for j in range(i + 1, k):
                edges.append((block + i, block + j))
    edges.append((k - 1, k))
    return Graph(2 * k, edges)


def planted_cliques(num_cliques: int = 4, clique_size: int = 5) -> Graph:
    """Disjoint k-cliques arranged in a cycle with one bridge edge between
    consecutive cliques.  The cliques are the unambiguous optimal communities."""
    n = num_cliques * clique_size
    edges = []
    for c in range(num_cliques):
        base = c * clique_size
        for i in range(clique_size):
            for j in range(i + 1, clique_size):
                edges.append((base + i, base + j))
    for c in range(num_cliques):
        # last node of clique c to first node of the next clique
        u = c * clique_size + clique_size - 1
        v = ((c + 1) % num_cliques) * clique_size
        edges.append((u, v))
    return Graph(n, edges)


def gnp_random_graph(n: int, p: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, p) with a deterministic generator."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        draws = rng.random(n - i - 1)
        for offset, r in enumerate(draws):
            if r < p:
                edges.append((i, i + 1 + offset))
    return Graph(n, edges)


def random_connected_graph(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) conditioned on connectivity (resamples until connected)."""
    from .graph import connected_components

    for attempt in range(1000):
        g = gnp_random_graph(n, p, seed=seed * 1000 + attempt)
        if g.edge_count and len(connected_components(g)) == 1:
            return g
    raise RuntimeError(f"no connected G({n}, {p}) after 1000 attempts")


def two_level_cliques(
    num_groups: int = 2, cliques_per_group: int = 2, clique_size: int = 5
) -> Graph:
    """Hierarchical fixture: groups of cliques, densely bridged inside a
    group, singly bridged between groups.

    Each group is a barbell-like chain of cliques (consecutive cliques share
    2 bridge edges so the group clusters as one block at the coarse level but
    splits into cliques when refined in isolation).
    """
    edges = []
    clique_base = []
    idx = 0
    for gi in range(num_groups):
        for ci in range(cliques_per_group):
            clique_base.append(idx)
            for i in range(clique_size):
                for j in range(i + 1, clique_size):
                    edges.append((idx + i, idx + j))
            idx += clique_size
    # intra-group bridges: two parallel-ish bridges between consecutive cliques
    for gi in range(num_groups):
        for ci in range(cliques_per_group - 1):
            a = clique_base[gi * cliques_per_group + ci]
            b = clique_base[gi * cliques_per_group + ci + 1]
            edges.append((a + clique_size - 1, b))
            edges.append((a + clique_size - 2, b + 1))
    # inter-group single bridges in a chain
    for gi in range(num_groups - 1):
        a = clique_base[gi * cliques_per_group + cliques_per_group - 1]
        b = clique_base[(gi + 1) * cliques_per_group]
        edges.append((a + clique_size - 1, b))
    n = num_groups * cliques_per_group * clique_size
    return Graph(n, edges)


def attributed_blocks(
    block_sizes,
    category_rates,
    categories=("X", "Y"),
    attribute: str = "kind",
    intra_p: float = 0.6,
    inter_bridges: int = 1,
    seed: int = 0,
):
    """Block-structured graph with a categorical attribute enriched per block.

    ``category_rates[b]`` is the probability a node of block b carries
    ``categories[0]``; the rest get ``categories[1]``.  Blocks are dense
    G(size, intra_p) subgraphs chained by ``inter_bridges`` bridge edges.
    Returns ``(graph, attribute_table_text)``.
    """
    rng = np.random.default_rng(seed)
    n = sum(block_sizes)
    edges = set()
    starts = []
    base = 0
    for size in block_sizes:
        starts.append(base)
        for i in range(size):
            for j in range(i + 1, size):
                if rng.random() < intra_p:
                    edges.add((base + i, base + j))
        # spanning path so each block is connected
        for i in range(size - 1):
            edges.add((base + i, base + i + 1))
        base += size
    for b in range(len(block_sizes) - 1):
        for k in range(inter_bridges):
            u = starts[b] + int(rng.integers(0, block_sizes[b]))
            v = starts[b + 1] + int(rng.integers(0, block_sizes[b + 1]))
            if u != v:
                edges.add((u, v) if u < v else (v, u))
    labels = []
    for b, size in enumerate(block_sizes):
        for _ in range(size):
            labels.append(categories[0] if rng.random() < category_rates[b] else categories[1])
    g = Graph(n, edges)
    rows = [f"node\t{attribute}"]
    rows.extend(f"{g.tokens[i]}\t{labels[i]}" for i in range(n))
    return g, "\n".join(rows) + "\n"


def edge_list_text(g: Graph) -> str:
    """Serialize a graph back to the edge-list format."""
    lines = [f"{g.tokens[u]} {g.tokens[v]}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
