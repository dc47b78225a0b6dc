"""Simple undirected graphs: ingestion, components, subgraphs, quotients.

Nodes are dense integer ids ``0..n-1`` internally; the original string
tokens from the input file are kept on the graph so every export can speak
the caller's vocabulary.  Graphs are immutable after construction and safe
to share across worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field


MISSING_CATEGORY = "missing"


class GraphError(ValueError):
    """Invalid graph construction or operation."""


class EdgeListParseError(GraphError):
    """Malformed edge-list line; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class IngestReport:
    """Counts of input lines dropped while enforcing the simple-graph invariants."""

    duplicate_edges: int = 0
    self_loops: int = 0


class Graph:
    """Immutable simple undirected graph.

    Invariants enforced here: no self-loops, no duplicate edges, symmetric
    adjacency, every endpoint in ``[0, node_count)``.
    """

    __slots__ = (
        "node_count",
        "edges",
        "adjacency",
        "tokens",
        "token_to_id",
        "attributes",
        "degrees",
        "ingest",
        "attribute_warnings",
    )

    def __init__(
        self,
        node_count: int,
        edges,
        tokens=None,
        attributes=None,
        ingest: IngestReport | None = None,
        attribute_warnings=None,
    ):
        if node_count < 0:
            raise GraphError("node_count must be non-negative")
        canon = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(f"edge ({u}, {v}) outside [0, {node_count})")
            e = (u, v) if u < v else (v, u)
            if e in canon:
                raise GraphError(f"duplicate edge {e}")
            canon.add(e)
        self.node_count = node_count
        self.edges = tuple(sorted(canon))
        adj = [[] for _ in range(node_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = tuple(tuple(sorted(ns)) for ns in adj)
        self.degrees = tuple(len(ns) for ns in self.adjacency)
        if tokens is None:
            tokens = [str(i) for i in range(node_count)]
        if len(tokens) != node_count:
            raise GraphError("tokens must have one entry per node")
        self.tokens = tuple(str(t) for t in tokens)
        self.token_to_id = {t: i for i, t in enumerate(self.tokens)}
        if len(self.token_to_id) != node_count:
            raise GraphError("tokens must be unique")
        self.attributes = dict(attributes) if attributes else {}
        for name, labels in self.attributes.items():
            if len(labels) != node_count:
                raise GraphError(f"attribute {name!r} must label every node")
            self.attributes[name] = tuple(labels)
        self.ingest = ingest or IngestReport()
        self.attribute_warnings = tuple(attribute_warnings or ())

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, node: int):
        return self.adjacency[node]

    def has_edge(self, u: int, v: int) -> bool:
        e = (u, v) if u < v else (v, u)
        lo = self.adjacency[e[0]]
        return e[1] in lo

    def degree_sequence(self):
        """Per-node degrees; their sum is twice the edge count."""
        return self.degrees

    def with_attributes(self, attributes, warnings=()):
        """Copy of this graph with the given attribute map attached."""
        merged = dict(self.attributes)
        merged.update(attributes)
        return Graph(
            self.node_count,
            self.edges,
            tokens=self.tokens,
            attributes=merged,
            ingest=self.ingest,
            attribute_warnings=tuple(self.attribute_warnings) + tuple(warnings),
        )

    def __repr__(self):
        return f"Graph(n={self.node_count}, m={self.edge_count})"


@dataclass(frozen=True)
class QuotientGraph:
    """Graph over clusters: nodes carry member counts, edges count the
    original inter-cluster edges.  No self-edges."""

    cluster_nodes: tuple  # ((cluster_id, member_count), ...)
    weighted_edges: dict = field(default_factory=dict)  # (a, b) a < b -> count

    @property
    def cluster_ids(self):
        return tuple(cid for cid, _ in self.cluster_nodes)

    def size_of(self, cluster_id) -> int:
        for cid, count in self.cluster_nodes:
            if cid == cluster_id:
                return count
        raise GraphError(f"unknown cluster {cluster_id}")

    @property
    def total_edge_weight(self) -> int:
        return sum(self.weighted_edges.values())


def load_edge_list(text: str) -> Graph:
    """Parse an edge-list document into a simple graph.

    One edge per line, two whitespace-separated node tokens; ``#`` starts a
    comment line.  Duplicate lines and self-loops are dropped and counted in
    the returned graph's ``ingest`` report.  Tokens are mapped to dense ids
    in first-appearance order.
    """
    token_ids: dict[str, int] = {}
    edges = set()
    duplicates = 0
    self_loops = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, f"expected two tokens, got {len(parts)}")
        ids = []
        for tok in parts:
            if tok not in token_ids:
                token_ids[tok] = len(token_ids)
            ids.append(token_ids[tok])
        u, v = ids
        if u == v:
            self_loops += 1
            continue
        e = (u, v) if u < v else (v, u)
        if e in edges:
            duplicates += 1
            continue
        edges.add(e)
    tokens = sorted(token_ids, key=token_ids.get)
    return Graph(
        len(token_ids),
        edges,
        tokens=tokens,
        ingest=IngestReport(duplicate_edges=duplicates, self_loops=self_loops),
    )


def load_attributes(graph: Graph, text: str) -> Graph:
    """Attach categorical node attributes from a delimited table.

    The first column holds the node token; the header row names the
    attributes.  Comma or tab delimiting is auto-detected from the header.
    Nodes absent from the table get the ``missing`` category; tokens not in
    the graph are collected as warnings on the returned graph.  A duplicate
    node row is an error.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return graph.with_attributes({})
    delim = "\t" if "\t" in lines[0] else ","
    header = [h.strip() for h in lines[0].split(delim)]
    names = header[1:]
    labels = {name: [MISSING_CATEGORY] * graph.node_count for name in names}
    seen_tokens = set()
    warnings = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(delim)]
        token = cells[0]
        if token in seen_tokens:
            raise GraphError(f"duplicate attribute row for node {token!r}")
        seen_tokens.add(token)
        node = graph.token_to_id.get(token)
        if node is None:
            warnings.append(f"row {lineno}: token {token!r} not in graph")
            continue
        for name, cell in zip(names, cells[1:]):
            if cell:
                labels[name][node] = cell
    return graph.with_attributes(labels, warnings=warnings)


def connected_components(g: Graph):
    """Maximal connected node sets, largest first, ties by smallest member id."""
    seen = [False] * g.node_count
    components = []
    for start in range(g.node_count):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            node = stack.pop()
            comp.append(node)
            for nb in g.adjacency[node]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        components.append(frozenset(comp))
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def largest_component_subgraph(g: Graph) -> Graph:
    """Restriction of ``g`` to its largest connected component."""
    comps = connected_components(g)
    if not comps:
        return g
    return induced_subgraph(g, comps[0])


def induced_subgraph(g: Graph, nodes) -> Graph:
    """Subgraph on ``nodes`` keeping exactly the edges with both endpoints inside.

    Ids are re-densified in increasing original-id order; original tokens are
    retained, so the mapping back is ``token_to_id`` of the parent.
    """
    node_set = set(nodes)
    for node in node_set:
        if not (0 <= node < g.node_count):
            raise GraphError(f"unknown node id {node}")
    ordered = sorted(node_set)
    remap = {old: new for new, old in enumerate(ordered)}
    edges = [
        (remap[u], remap[v]) for u, v in g.edges if u in node_set and v in node_set
    ]
    attributes = {
        name: [labels[old] for old in ordered] for name, labels in g.attributes.items()
    }
    return Graph(
        len(ordered),
        edges,
        tokens=[g.tokens[old] for old in ordered],
        attributes=attributes,
    )


def quotient_graph(g: Graph, assignment) -> QuotientGraph:
    """Quotient of ``g`` under a cluster assignment (node id -> cluster id).

    Cluster nodes carry member counts; a quotient edge (A, B) exists iff some
    original edge joins a member of A to one of B, weighted by the number of
    such edges.  Intra-cluster edges do not appear (no self-edges).
    """
    if len(assignment) != g.node_count:
        raise GraphError("assignment must cover every node")
    counts: dict[int, int] = {}
    for cid in assignment:
        counts[cid] = counts.get(cid, 0) + 1
    weighted: dict = {}
    for u, v in g.edges:
        a, b = assignment[u], assignment[v]
        if a == b:
            continue
        key = (a, b) if a < b else (b, a)
        weighted[key] = weighted.get(key, 0) + 1
    return QuotientGraph(
        cluster_nodes=tuple(sorted(counts.items())), weighted_edges=weighted
    )
