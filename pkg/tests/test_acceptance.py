"""End-to-end acceptance checks, one test per contract.

Each test states its tolerance and computes its oracle independently of the
code under test (from-definition modularity sums, exhaustive merge scans,
Simpson quadrature, hand-counted category tables) before asserting.
"""

import filecmp
import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from modview.cli import EXIT_OK, main
from modview.documents import frontier_dense_map
from modview.generators import (
    barbell_cliques,
    edge_list_text,
    gnp_random_graph,
    planted_cliques,
    random_connected_graph,
    two_level_cliques,
)
from modview.graph import load_attributes, load_edge_list, quotient_graph
from modview.hierarchy import (
    build_hierarchy,
    coarsen_chain,
    coarsen_view,
    initial_view,
    refine_view,
)
from modview.layout import (
    Layout,
    LayoutConfig,
    coarsen_layout,
    fr_layout,
    pair_equilibrium_distance,
    refine_layout,
)
from modview.modularity import (
    MaximizerConfig,
    Partition,
    brute_force_optimal,
    greedy_maximize,
    modularity,
)
from modview.significance import (
    derive_seed,
    is_significant,
    null_distribution,
    p_value,
    sample_configuration_graph,
)
from modview.stats import chi2_sf, cluster_chi2


def definition_modularity(g, labels):
    """Q straight from the definition: sum over clusters of
    e_c/m - (d_c/2m)^2, with e_c and d_c counted edge by edge."""
    m = g.edge_count
    clusters = set(labels)
    q = 0.0
    for c in clusters:
        members = {v for v in range(g.node_count) if labels[v] == c}
        e_c = sum(1 for a, b in g.edges if a in members and b in members)
        d_c = sum(g.degrees[v] for v in members)
        q += e_c / m - (d_c / (2 * m)) ** 2
    return q


def test_modularity_oracle_equivalence():
    """modularity() matches a from-definition sum to 1e-12 on 200 random
    connected graphs (n <= 10); greedy never beats exhaustive search; greedy
    attains the known optimum on the two reference fixtures.  Budget 2 min."""
    start = time.monotonic()
    rng = random.Random(424242)
    for trial in range(200):
        n = rng.randint(3, 10)
        g = random_connected_graph(n, p=rng.uniform(0.25, 0.9), seed=rng.randrange(2**31))
        best = greedy_maximize(g, MaximizerConfig(seed=trial))
        exact = brute_force_optimal(g)
        assert best.modularity == pytest.approx(
            definition_modularity(g, best.assignment), abs=1e-12
        )
        assert exact.modularity == pytest.approx(
            definition_modularity(g, exact.assignment), abs=1e-12
        )
        assert best.modularity <= exact.modularity + 1e-15

    barbell = barbell_cliques(3)
    greedy_b = greedy_maximize(barbell, MaximizerConfig(seed=0))
    exact_b = brute_force_optimal(barbell)
    assert greedy_b.modularity == 5 / 14
    assert exact_b.modularity == 5 / 14

    planted = planted_cliques(4, 5)
    greedy_p = greedy_maximize(planted, MaximizerConfig(seed=0))
    assert greedy_p.assignment == tuple(i // 5 for i in range(20))
    assert greedy_p.modularity == 29 / 44  # optimum of the planted partition

    elapsed = time.monotonic() - start
    assert elapsed < 120, f"budget exceeded: {elapsed:.1f}s"


def test_null_sampler_exactness():
    """100 degree-preserving null samples of the planted fixture keep the
    exact per-node degree sequence and stay simple graphs.  Budget 10 s."""
    start = time.monotonic()
    g = planted_cliques(4, 5)
    for i in range(100):
        sample = sample_configuration_graph(g.degrees, derive_seed(7, "null", i), g)
        assert sample.degrees == g.degrees  # exact, node by node
        seen = set()
        for a, b in sample.edges:
            assert a != b, "self-loop in null sample"
            key = (min(a, b), max(a, b))
            assert key not in seen, "duplicate edge in null sample"
            seen.add(key)
        assert len(seen) == g.edge_count
    elapsed = time.monotonic() - start
    assert elapsed < 10, f"budget exceeded: {elapsed:.1f}s"


def test_significance_calibration():
    """The planted fixture is declared significant with p <= 0.02 (50
    trials) for every one of 10 master seeds; dense G(60, 0.5) is declared
    structureless for at least 8 of 10 seeds.  Budget 5 min."""
    start = time.monotonic()
    planted = planted_cliques(4, 5)
    for seed in range(1, 11):
        cfg = MaximizerConfig(seed=seed)
        best = greedy_maximize(planted, cfg)
        nd = null_distribution(planted, trials=50, cfg=cfg, seed=seed)
        p = p_value(nd, best.modularity)
        assert p <= 0.02, f"seed {seed}: p={p}"
        assert is_significant(nd, best.modularity, alpha=0.01)

    structureless = 0
    for seed in range(1, 11):
        dense = gnp_random_graph(60, 0.5, seed=seed)
        cfg = MaximizerConfig(seed=seed)
        best = greedy_maximize(dense, cfg)
        nd = null_distribution(dense, trials=50, cfg=cfg, seed=seed)
        if not is_significant(nd, best.modularity, alpha=0.01):
            structureless += 1
    assert structureless >= 8, f"only {structureless}/10 dense graphs rejected"

    elapsed = time.monotonic() - start
    assert elapsed < 300, f"budget exceeded: {elapsed:.1f}s"


def test_coarsening_contract():
    """With the gate disabled (threshold -1) the planted fixture's merge
    chain has non-increasing recorded modularity and every merge is the
    exact-arithmetic argmax over all edge-connected cluster pairs."""
    g = planted_cliques(4, 5)
    best = greedy_maximize(g, MaximizerConfig(seed=0))
    steps, memberships = coarsen_chain(g, best, threshold=-1.0)
    assert len(steps) == best.cluster_count - 1

    qs = [q_after for _, _, q_after in steps]
    assert all(a >= b for a, b in zip(qs, qs[1:])), "chain Q increased"

    m = g.edge_count
    labels = list(best.assignment)
    next_id = best.cluster_count
    for left, right, q_after in steps:
        # exhaustive scan with exact integer arithmetic
        degree_sum = {c: 0 for c in set(labels)}
        pair_edges = {}
        for v, c in enumerate(labels):
            degree_sum[c] += g.degrees[v]
        for a, b in g.edges:
            ca, cb = labels[a], labels[b]
            if ca != cb:
                key = (min(ca, cb), max(ca, cb))
                pair_edges[key] = pair_edges.get(key, 0) + 1
        best_key, best_num = None, None
        for (a, b), e_ab in sorted(pair_edges.items()):
            num = 2 * m * e_ab - degree_sum[a] * degree_sum[b]
            if best_num is None or num > best_num:
                best_key, best_num = (a, b), num
        merged_pair = (min(left, right), max(left, right))
        assert merged_pair == best_key, f"merge {merged_pair} is not the argmax {best_key}"
        # recorded Q matches the from-definition value after the merge
        labels = [next_id if c in merged_pair else c for c in labels]
        assert q_after == pytest.approx(definition_modularity(g, labels), abs=1e-12)
        next_id += 1

    # the final merge absorbs every best-level cluster exactly once
    assert sorted(memberships[max(memberships)]) == list(range(best.cluster_count))


def test_hierarchy_wellformedness_and_inverse():
    """1000 random frontier walks across generated trees keep the frontier
    an exact partition of the node set, and refine followed by coarsen (and
    vice versa) returns the identical frontier."""
    worlds = []
    for g, trials in [
        (two_level_cliques(12, 2, 5), 50),
        (two_level_cliques(8, 2, 4), 50),
        (planted_cliques(4, 5), 50),
    ]:
        tree = build_hierarchy(g, cfg=MaximizerConfig(seed=0), trials=trials, seed=1)
        worlds.append((g, tree))

    rng = random.Random(31337)
    walks = 0
    while walks < 1000:
        g, tree = worlds[walks % len(worlds)]
        view = initial_view(tree, g)
        for _ in range(rng.randint(1, 6)):
            frontier = set(view.frontier)
            refinables = [
                c for c in view.frontier
                if tree.node(c).children and not set(tree.node(c).children) <= frontier
            ]
            coarsenables = [
                tree.node(c).parent for c in view.frontier
                if tree.node(c).parent is not None
                and set(tree.node(tree.node(c).parent).children) <= frontier
            ]
            moves = [("refine", c) for c in refinables] + [
                ("coarsen", p) for p in coarsenables
            ]
            if not moves:
                break
            kind, target = rng.choice(moves)
            if kind == "refine":
                after = refine_view(tree, g, view, target)
                assert coarsen_view(tree, g, after, target).frontier == view.frontier
            else:
                after = coarsen_view(tree, g, view, target)
                assert refine_view(tree, g, after, target).frontier == view.frontier
            view = after
            # partition-of-nodes invariant: every node in exactly one cluster
            counts = [0] * g.node_count
            for c in view.frontier:
                for v in tree.node(c).members:
                    counts[v] += 1
            assert all(k == 1 for k in counts)
            assert view.induced_q == pytest.approx(
                definition_modularity(
                    g, tree.labels_for_frontier(view.frontier)
                ),
                abs=1e-12,
            )
        walks += 1


def test_layout_laws():
    """Radius area law within 1e-9 relative; refining never moves frozen
    clusters (bit-exact); merged positions are the exact size-weighted
    centroid; an isolated pair settles within 10% of the 1-D force-balance
    oracle; identical seeds give identical layouts."""
    from modview.graph import QuotientGraph

    qg = QuotientGraph(
        cluster_nodes=((0, 3), (1, 12), (2, 27)),
        weighted_edges={(0, 1): 1, (1, 2): 2},
    )
    layout = fr_layout(qg, LayoutConfig(iterations=200, seed=6))
    consts = [math.pi * layout.radii[c] ** 2 / n for c, n in qg.cluster_nodes]
    assert (max(consts) - min(consts)) / consts[0] < 1e-9

    # freeze contract: every cluster outside the refined one keeps its exact floats
    childq = QuotientGraph(
        cluster_nodes=((0, 3), (2, 27), (5, 6), (6, 6)),
        weighted_edges={(5, 6): 3, (0, 5): 1, (2, 6): 2},
    )
    refined = refine_layout(layout, 1, childq, LayoutConfig(iterations=150, seed=6))
    assert refined.positions[0] == layout.positions[0]
    assert refined.positions[2] == layout.positions[2]
    assert refined.radii[0] == layout.radii[0]
    assert 1 not in refined.positions

    # weighted centroid, exactly representable coordinates
    stored = Layout(
        positions={0: (0.25, 1.5), 1: (0.75, -0.5), 9: (8.0, 8.0)},
        radii={0: 1.0, 1: 1.0, 9: 1.0},
        bounds=(0.0, 0.0, 16.0, 16.0),
        seed=0,
        area_scale=1.0,
        iterations=1,
        initial_temperature=0.1,
    )
    merged = coarsen_layout(stored, (0, 1), 4, {0: 1, 1: 3})
    expected = (
        float(Fraction(1, 4) * 1 + Fraction(3, 4) * 3) / 4,
        float(Fraction(3, 2) * 1 + Fraction(-1, 2) * 3) / 4,
    )
    assert merged.positions[4] == expected == (0.625, 0.0)
    assert merged.positions[9] == (8.0, 8.0)

    # pair equilibrium within 10% of the bisection oracle
    pair = QuotientGraph(cluster_nodes=((0, 4), (1, 4)), weighted_edges={(0, 1): 1})
    cfg = LayoutConfig(iterations=600, seed=5)
    placed = fr_layout(pair, cfg)
    d = math.dist(placed.positions[0], placed.positions[1])
    k = math.sqrt(cfg.bounds_area / 8)
    oracle = pair_equilibrium_distance(4.0, 4.0, k)
    assert abs(d - oracle) / oracle < 0.10

    # determinism per seed
    again = fr_layout(qg, LayoutConfig(iterations=200, seed=6))
    assert again.positions == layout.positions
    other = fr_layout(qg, LayoutConfig(iterations=200, seed=7))
    assert other.positions != layout.positions


def test_chi_squared_oracle():
    """p(chi2=10/3, dof=1) ~ 0.0679; a 50-point (dof, chi2) grid agrees with
    Simpson quadrature to 1e-8; per-cluster residuals satisfy
    sum_c r_c sqrt(E_c) = 0 to 1e-9."""
    p_ref = chi2_sf(10 / 3, 1)
    assert abs(p_ref - 0.0679) < 5e-5
    assert p_ref == pytest.approx(math.erfc(math.sqrt(5 / 3)), rel=1e-12)

    from test_stats import simpson_gamma_q

    points = [(dof, chi2) for dof in range(1, 11) for chi2 in (0.1, 1.0, 10 / 3, 10.0, 30.0)]
    assert len(points) == 50
    for dof, chi2 in points:
        assert chi2_sf(chi2, dof) == pytest.approx(
            simpson_gamma_q(dof / 2, chi2 / 2), abs=1e-8
        ), (dof, chi2)

    from test_stats import block_partition, labeled_graph

    cats = (["X"] * 7 + ["Y"] * 3) + (["X"] * 2 + ["Y"] * 8) + (["X"] * 5 + ["Y"] * 5)
    g = labeled_graph([10, 10, 10], cats)
    stats = cluster_chi2(g, block_partition(g, [10, 10, 10]), "kind")
    for cs in stats.clusters.values():
        balance = sum(
            cs.residuals[c] * math.sqrt(cs.expected[c]) for c in stats.categories
        )
        assert abs(balance) < 1e-9


def build_reconstruction_fixture():
    """100-node graph: a 41-node community of six tightly bridged cliques
    (sizes 7,7,7,7,7,6; BM counts 7,7,7,6,6,6 = 39 of 41) plus three large
    cliques of 21, 21 and 17 nodes carrying the remaining 37 BM / 22 HT, for
    a 76% global BM rate.  Double bridges between every sub-clique pair make
    the merge maximizer absorb the six of them into one community."""
    lines = []

    def clique(prefix, n, start):
        ids = [f"{prefix}{start + i}" for i in range(n)]
        for a, b in itertools.combinations(ids, 2):
            lines.append(f"{a} {b}")
        return ids

    subs, off = [], 0
    for size in (7, 7, 7, 7, 7, 6):
        subs.append(clique("a", size, off))
        off += size
    for (_, si), (_, sj) in itertools.combinations(enumerate(subs), 2):
        lines.append(f"{si[0]} {sj[1]}")
        lines.append(f"{si[1]} {sj[0]}")
    others, off = [], 0
    for size in (21, 21, 17):
        others.append(clique("c", size, off))
        off += size
    lines.append(f"{others[0][0]} {others[1][0]}")
    lines.append(f"{others[1][1]} {others[2][0]}")
    lines.append(f"{subs[0][3]} {others[0][1]}")
    g = load_edge_list("\n".join(lines))

    bm_in_sub = {0: 7, 1: 7, 2: 7, 3: 6, 4: 6, 5: 6}
    rows = ["node\tgroup"]
    for k, sub in enumerate(subs):
        for i, tok in enumerate(sub):
            rows.append(f"{tok}\t{'BM' if i < bm_in_sub[k] else 'HT'}")
    bm_in_other = {0: 14, 1: 13, 2: 10}
    for k, cl in enumerate(others):
        for i, tok in enumerate(cl):
            rows.append(f"{tok}\t{'BM' if i < bm_in_other[k] else 'HT'}")
    return load_attributes(g, "\n".join(rows))


def test_directional_reconstruction():
    """A 41-node cluster holding 39 of the BM category under a 76% global
    BM rate is significantly enriched (p < 0.05), while each of its six
    sub-clusters is individually compatible with chance (p > 0.05).  The
    chi-squared values are checked against exact hand-counted fractions."""
    g = build_reconstruction_fixture()
    labels = g.attributes["group"]
    assert g.node_count == 100
    assert sum(1 for v in labels if v == "BM") == 76

    tree = build_hierarchy(g, cfg=MaximizerConfig(seed=0), trials=50, seed=1)
    assert not tree.no_structure
    sizes = sorted((tree.node(c).size for c in tree.best_level), reverse=True)
    assert sizes == [41, 21, 21, 17]

    view = initial_view(tree, g)
    stats = cluster_chi2(g, view.induced_partition, "group")
    dense = frontier_dense_map(tree, view.frontier)
    big = next(c for c in view.frontier if tree.node(c).size == 41)
    cs = stats.clusters[dense[big]]
    assert cs.counts["BM"] == 39

    def exact_chi2(n, bm):
        e_bm = Fraction(n * 76, 100)
        e_ht = Fraction(n * 24, 100)
        return float((bm - e_bm) ** 2 / e_bm + ((n - bm) - e_ht) ** 2 / e_ht)

    assert cs.chi2 == pytest.approx(exact_chi2(41, 39), rel=1e-9)
    assert cs.p < 0.05

    node = tree.node(big)
    assert node.status == "refined"
    assert sorted(tree.node(ch).size for ch in node.children) == [6, 7, 7, 7, 7, 7]

    refined_view = refine_view(tree, g, view, big)
    sub_stats = cluster_chi2(g, refined_view.induced_partition, "group")
    sub_dense = frontier_dense_map(tree, refined_view.frontier)
    bm_counts = []
    for child in node.children:
        sub = sub_stats.clusters[sub_dense[child]]
        bm_counts.append(sub.counts.get("BM", 0))
        assert sub.chi2 == pytest.approx(
            exact_chi2(sub.size, sub.counts.get("BM", 0)), rel=1e-9
        )
        assert sub.p > 0.05, f"sub-cluster of size {sub.size} unexpectedly enriched"
    assert sorted(bm_counts) == [6, 6, 6, 7, 7, 7]


def test_cli_reproducibility(tmp_path, capsys):
    """Two full pipeline runs with --seed 1 on the planted fixture write
    byte-identical artifacts (view, hierarchy, SVG, partition)."""
    edges = tmp_path / "planted.txt"
    edges.write_text(edge_list_text(planted_cliques(4, 5)))
    runs = [tmp_path / "run1", tmp_path / "run2"]
    for out in runs:
        code = main(
            ["hierarchy", str(edges), "--seed", "1", "--trials", "50",
             "--out", str(out)]
        )
        assert code == EXIT_OK
    capsys.readouterr()
    names = ["view.json", "hierarchy.json", "view.svg", "partition.tsv"]
    match, mismatch, errors = filecmp.cmpfiles(runs[0], runs[1], names, shallow=False)
    assert match == names
    assert not mismatch and not errors
