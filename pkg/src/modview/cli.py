"""Batch command-line driver.

Commands mirror the pipeline stages and write the same export documents the
service serves.  Every run prints an effective-config line (stderr) from
which it can be reproduced exactly: all randomness flows from --seed, with
stage sub-seeds derived deterministically.

Exit codes: 0 success, 2 validation/input errors, 3 when the input graph
shows no significant structure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import generators
from .documents import dumps, hierarchy_document, layout_document, svg_document, view_document
from .graph import (
    Graph,
    GraphError,
    load_attributes,
    load_edge_list,
    quotient_graph,
)
from .hierarchy import HierarchyError, build_hierarchy, initial_view
from .layout import LayoutConfig, LayoutError, fr_layout
from .modularity import MaximizerConfig, ModularityError, greedy_maximize, partition_to_tsv
from .session import PipelineParams
from .significance import (
    DEFAULT_ALPHA,
    DEFAULT_TRIALS,
    SignificanceError,
    derive_seed,
    is_significant,
    null_distribution,
    null_to_text,
    p_value,
    sample_configuration_graph,
)
from .stats import StatsError, cluster_chi2, stats_table

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_STRUCTURE = 3

STATE_FILES = {
    "view-json": "view.json",
    "hierarchy-json": "hierarchy.json",
    "svg": "view.svg",
    "partition-tsv": "partition.tsv",
}

_ERRORS = (
    GraphError,
    ModularityError,
    SignificanceError,
    HierarchyError,
    LayoutError,
    StatsError,
    OSError,
    ValueError,
)


def _echo_config(args, command: str) -> None:
    skip = {"func", "command"}
    parts = [f"command={command}"]
    for key in sorted(vars(args)):
        if key in skip:
            continue
        parts.append(f"{key}={getattr(args, key)}")
    print("# config " + " ".join(parts), file=sys.stderr)


def _load_graph(args) -> Graph:
    g = load_edge_list(Path(args.edges).read_text())
    if getattr(args, "attributes", None):
        g = load_attributes(g, Path(args.attributes).read_text())
    if getattr(args, "largest_component", False):
        from .graph import largest_component_subgraph

        g = largest_component_subgraph(g)
    return g


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_cluster(args) -> int:
    g = _load_graph(args)
    part = greedy_maximize(g, MaximizerConfig(seed=args.seed))
    _write(partition_to_tsv(g, part), args.out)
    print(f"clusters={part.cluster_count} q={part.modularity!r}", file=sys.stderr)
    return EXIT_OK


def cmd_significance(args) -> int:
    g = _load_graph(args)
    cfg = MaximizerConfig(seed=args.seed)
    part = greedy_maximize(g, cfg)
    nd = null_distribution(g, trials=args.trials, cfg=cfg, seed=args.seed, jobs=args.jobs)
    p = p_value(nd, part.modularity)
    _write(null_to_text(nd), args.out)
    significant = is_significant(nd, part.modularity, args.alpha)
    print(
        f"q={part.modularity!r} threshold={nd.threshold!r} p={p!r} "
        f"significant={significant}"
    )
    return EXIT_OK if significant else EXIT_NO_STRUCTURE


def cmd_hierarchy(args) -> int:
    g = _load_graph(args)
    tree = build_hierarchy(
        g,
        cfg=MaximizerConfig(seed=args.seed),
        trials=args.trials,
        seed=args.seed,
        alpha=args.alpha,
        strict_levels=args.strict_levels,
    )
    view = initial_view(tree, g)
    qg = quotient_graph(g, tree.labels_for_frontier(view.frontier))
    layout = fr_layout(qg, LayoutConfig(iterations=args.iterations, seed=args.seed))
    view_doc = view_document(tree, view, layout, qg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "hierarchy.json").write_text(dumps(hierarchy_document(tree)))
    (out_dir / "view.json").write_text(dumps(view_doc))
    (out_dir / "view.svg").write_text(svg_document(view_doc))
    (out_dir / "partition.tsv").write_text(partition_to_tsv(g, view.induced_partition))
    print(
        f"clusters={len(tree.best_level)} q={tree.global_q!r} "
        f"threshold={tree.global_threshold!r} p={tree.global_p!r} "
        f"no_structure={tree.no_structure} out={out_dir}"
    )
    return EXIT_NO_STRUCTURE if tree.no_structure else EXIT_OK


def cmd_layout(args) -> int:
    g = _load_graph(args)
    part = greedy_maximize(g, MaximizerConfig(seed=args.seed))
    qg = quotient_graph(g, part.assignment)
    layout = fr_layout(qg, LayoutConfig(iterations=args.iterations, seed=args.seed))
    _write(dumps(layout_document(layout, qg)), args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    g = _load_graph(args)
    part = greedy_maximize(g, MaximizerConfig(seed=args.seed))
    stats = cluster_chi2(g, part, args.attribute)
    _write(stats_table(stats), args.out)
    return EXIT_OK


def cmd_export(args) -> int:
    state = Path(args.state)
    source = state / STATE_FILES[args.format]
    if not source.is_file():
        raise GraphError(
            f"no {source.name} under {state}; run the hierarchy command first"
        )
    _write(source.read_text(), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "barbell":
        g = generators.barbell_cliques(args.clique_size)
    elif kind == "planted":
        g = generators.planted_cliques(args.cliques, args.clique_size)
    elif kind == "two-level":
        g = generators.two_level_cliques(args.groups, args.cliques_per_group, args.clique_size)
    elif kind == "gnp":
        g = generators.gnp_random_graph(args.n, args.p, seed=args.seed)
    elif kind == "blocks":
        sizes = [int(s) for s in args.sizes.split(",")]
        rates = [float(r) for r in args.rates.split(",")]
        if len(sizes) != len(rates):
            raise GraphError("--sizes and --rates must have the same length")
        g, table = generators.attributed_blocks(sizes, rates, seed=args.seed)
        if args.attributes_out:
            Path(args.attributes_out).write_text(table)
    elif kind == "config-sample":
        base = load_edge_list(Path(args.source).read_text())
        g = sample_configuration_graph(
            base.degrees, derive_seed(args.seed, "gen"), base
        )
    else:  # unreachable through argparse choices
        raise GraphError(f"unknown generator {kind!r}")
    _write(generators.edge_list_text(g), args.out)
    print(f"n={g.node_count} m={g.edge_count}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _add_common(sub, seed=True, trials=False, alpha=False, jobs=False, out_default=None):
    if seed:
        sub.add_argument("--seed", type=int, default=0, help="master random seed")
    if trials:
        sub.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Monte Carlo trials")
    if alpha:
        sub.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="significance level")
    if jobs:
        sub.add_argument("--jobs", type=int, default=1, help="parallel null trials")
    sub.add_argument("--out", default=out_default, help="output path (default stdout)")


def _add_graph_input(sub):
    sub.add_argument("edges", help="edge-list file (one edge per line)")
    sub.add_argument("--largest-component", action="store_true",
                     help="restrict to the largest connected component")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modview",
        description="Statistically validated hierarchical graph clustering and layout.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("cluster", help="maximal-modularity partition as TSV")
    _add_graph_input(s)
    _add_common(s)
    s.set_defaults(func=cmd_cluster)

    s = subs.add_parser("significance", help="configuration-null test of the best partition")
    _add_graph_input(s)
    _add_common(s, trials=True, alpha=True, jobs=True)
    s.set_defaults(func=cmd_significance)

    s = subs.add_parser("hierarchy", help="build the full significance-gated hierarchy")
    _add_graph_input(s)
    s.add_argument("--seed", type=int, default=0, help="master random seed")
    s.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="Monte Carlo trials")
    s.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help="significance level")
    s.add_argument("--strict-levels", action="store_true",
                   help="require every refinement level to clear the global threshold")
    s.add_argument("--iterations", type=int, default=300, help="layout iterations")
    s.add_argument("--out", default="modview-out", help="output directory")
    s.set_defaults(func=cmd_hierarchy)

    s = subs.add_parser("layout", help="force-directed layout of the best-partition quotient")
    _add_graph_input(s)
    s.add_argument("--seed", type=int, default=0, help="master random seed")
    s.add_argument("--iterations", type=int, default=300, help="layout iterations")
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.set_defaults(func=cmd_layout)

    s = subs.add_parser("stats", help="per-cluster categorical enrichment table")
    _add_graph_input(s)
    s.add_argument("--attributes", required=True, help="attribute table file")
    s.add_argument("--attribute", required=True, help="attribute column to test")
    _add_common(s)
    s.set_defaults(func=cmd_stats)

    s = subs.add_parser("export", help="emit an artifact from a previous hierarchy run")
    s.add_argument("--state", default="modview-out", help="hierarchy output directory")
    s.add_argument("--format", required=True, choices=sorted(STATE_FILES))
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.set_defaults(func=cmd_export)

    s = subs.add_parser("gen", help="generate synthetic fixtures")
    s.add_argument("kind", choices=["barbell", "planted", "two-level", "gnp", "blocks", "config-sample"])
    s.add_argument("--clique-size", type=int, default=5)
    s.add_argument("--cliques", type=int, default=4)
    s.add_argument("--groups", type=int, default=2)
    s.add_argument("--cliques-per-group", type=int, default=2)
    s.add_argument("--n", type=int, default=60)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--sizes", default="30,30", help="comma-separated block sizes")
    s.add_argument("--rates", default="0.9,0.2", help="per-block rates of the first category")
    s.add_argument("--attributes-out", default=None, help="where to write the attribute table")
    s.add_argument("--source", default=None, help="input edges for config-sample")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.set_defaults(func=cmd_gen)

    s = subs.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    s.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _echo_config(args, args.command)
    if args.command == "gen" and args.kind == "config-sample" and not args.source:
        print("error: config-sample requires --source", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
