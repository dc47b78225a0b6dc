"""Interactive session state: one graph, its cluster tree, and the current
view + layout, with snapshot history for exact undo.

Mutations (refine / coarsen / undo) are serialized by a per-session lock and
keep the frontier and the layout's node set identical at all times.  When a
cluster is coarsened away, its children's positions are cached so a later
re-refine restores them exactly instead of re-simulating.
"""

from __future__ import annotations

import secrets
import threading
from dataclasses import dataclass, field

from .graph import Graph, largest_component_subgraph, quotient_graph
from .hierarchy import (
    ClusterTree,
    HierarchyError,
    ViewState,
    build_hierarchy,
    coarsen_view,
    initial_view,
    refine_view,
)
from .layout import Layout, LayoutConfig, coarsen_layout, fr_layout, radius_for, refine_layout
from .modularity import MaximizerConfig
from .stats import AttributeStats, cluster_chi2
from .significance import DEFAULT_ALPHA, DEFAULT_TRIALS


class SessionError(ValueError):
    """Invalid move or request against a session; carries a short reason."""

    def __init__(self, reason: str, detail: str = ""):
        super().__init__(detail or reason)
        self.reason = reason
        self.detail = detail or reason


@dataclass(frozen=True)
class PipelineParams:
    """Everything create_session needs beyond the input documents."""

    seed: int = 0
    trials: int = DEFAULT_TRIALS
    alpha: float = DEFAULT_ALPHA
    largest_component: bool = False
    strict_levels: bool = False
    iterations: int = 300
    jobs: int = 1


class Session:
    """One analyst's exploration of one graph."""

    def __init__(self, session_id: str, graph: Graph, params: PipelineParams):
        self.id = session_id
        self.graph = graph
        self.params = params
        self.lock = threading.RLock()
        self.state = "building"
        self.error: str | None = None
        self.tree: ClusterTree | None = None
        self.view: ViewState | None = None
        self.layout: Layout | None = None
        self.history: list = []
        self._position_cache: dict = {}
        self._stats_cache: dict = {}

    # -- pipeline -----------------------------------------------------------

    def build(self) -> None:
        """Run the full pipeline; flips state to ready or error."""
        try:
            cfg = MaximizerConfig(seed=self.params.seed)
            self.tree = build_hierarchy(
                self.graph,
                cfg=cfg,
                trials=self.params.trials,
                seed=self.params.seed,
                alpha=self.params.alpha,
                strict_levels=self.params.strict_levels,
            )
            view = initial_view(self.tree, self.graph)
            qg = quotient_graph(self.graph, self.tree.labels_for_frontier(view.frontier))
            layout = fr_layout(qg, self._layout_config())
            with self.lock:
                self.view = view
                self.layout = layout
                self.state = "ready"
        except Exception as exc:  # surfaced via the status endpoint
            with self.lock:
                self.error = str(exc)
                self.state = "error"

    def _layout_config(self) -> LayoutConfig:
        return LayoutConfig(iterations=self.params.iterations, seed=self.params.seed)

    def _require_ready(self) -> None:
        if self.state == "building":
            raise SessionError("building", "session is still building")
        if self.state == "error":
            raise SessionError("build failed", self.error or "build failed")

    def summary(self) -> dict:
        base = {
            "id": self.id,
            "state": self.state,
            "n": self.graph.node_count,
            "m": self.graph.edge_count,
        }
        if self.state == "error":
            base["error"] = self.error
        if self.state == "ready":
            tree = self.tree
            base.update(
                {
                    "clusters": len(tree.best_level),
                    "q": tree.global_q,
                    "threshold": tree.global_threshold,
                    "p": tree.global_p,
                    "no_structure": tree.no_structure,
                }
            )
        return base

    # -- queries ------------------------------------------------------------

    def quotient(self):
        return quotient_graph(
            self.graph, self.tree.labels_for_frontier(self.view.frontier)
        )

    def stats_for(self, attribute: str) -> AttributeStats:
        self._require_ready()
        key = (attribute, self.view.frontier)
        if key not in self._stats_cache:
            self._stats_cache[key] = cluster_chi2(
                self.graph, self.view.induced_partition, attribute
            )
        return self._stats_cache[key]

    # -- moves --------------------------------------------------------------

    def _push_history(self) -> None:
        self.history.append((self.view, self.layout))

    def _known_node(self, cluster_id: int):
        if cluster_id not in self.tree.nodes:
            raise SessionError(
                "not in view", f"cluster {cluster_id} is not in the current view"
            )
        return self.tree.node(cluster_id)

    def refine(self, cluster_id: int) -> None:
        with self.lock:
            self._require_ready()
            node = self._known_node(cluster_id)
            if cluster_id not in self.view.frontier:
                raise SessionError("not in view", f"cluster {cluster_id} is not in the current view")
            if not node.children:
                raise SessionError(
                    "no significant substructure",
                    f"cluster {cluster_id} has no significant substructure",
                )
            self._push_history()
            new_view = refine_view(self.tree, self.graph, self.view, cluster_id)
            qg = quotient_graph(
                self.graph, self.tree.labels_for_frontier(new_view.frontier)
            )
            cached = self._position_cache.get(cluster_id)
            if cached is not None and set(cached) == set(node.children):
                positions = dict(self.layout.positions)
                radii = dict(self.layout.radii)
                del positions[cluster_id], radii[cluster_id]
                sizes = dict(qg.cluster_nodes)
                for child, pt in cached.items():
                    positions[child] = pt
                    radii[child] = radius_for(sizes[child], self.layout.area_scale)
                new_layout = Layout(
                    positions=positions,
                    radii=radii,
                    bounds=self.layout.bounds,
                    seed=self.layout.seed,
                    area_scale=self.layout.area_scale,
                    iterations=self.layout.iterations,
                    initial_temperature=self.layout.initial_temperature,
                )
            else:
                new_layout = refine_layout(
                    self.layout, cluster_id, qg, self._layout_config()
                )
            self.view, self.layout = new_view, new_layout
            self._check_sync()

    def resolve_coarsen_target(self, target: int) -> int:
        """Map a requested coarsen target to the parent that will absorb it.

        ``target`` may name the parent itself (all children in view) or any
        frontier cluster, in which case its parent is used.
        """
        node = self._known_node(target)
        if node.children and all(c in self.view.frontier for c in node.children):
            return target
        if target in self.view.frontier:
            if node.parent is None:
                raise SessionError(
                    "at significance boundary",
                    f"cluster {target} is at the significance boundary",
                )
            return node.parent
        raise SessionError("not in view", f"cluster {target} is not in the current view")

    def coarsen(self, target: int) -> None:
        with self.lock:
            self._require_ready()
            parent_id = self.resolve_coarsen_target(target)
            parent = self.tree.node(parent_id)
            missing = [c for c in parent.children if c not in self.view.frontier]
            if missing:
                raise SessionError(
                    "children not in view",
                    f"cannot coarsen into {parent_id}: children {missing} not in view",
                )
            self._push_history()
            new_view = coarsen_view(self.tree, self.graph, self.view, parent_id)
            self._position_cache[parent_id] = {
                c: self.layout.positions[c] for c in parent.children
            }
            sizes = {c: self.tree.node(c).size for c in parent.children}
            new_layout = coarsen_layout(self.layout, parent.children, parent_id, sizes)
            self.view, self.layout = new_view, new_layout
            self._check_sync()

    def undo(self) -> None:
        with self.lock:
            self._require_ready()
            if not self.history:
                raise SessionError("nothing to undo", "no moves have been applied")
            self.view, self.layout = self.history.pop()
            self._check_sync()

    def _check_sync(self) -> None:
        if set(self.view.frontier) != set(self.layout.positions):
            raise AssertionError("view frontier and layout node set diverged")


class SessionStore:
    """In-memory registry of sessions keyed by opaque token."""

    def __init__(self):
        self._sessions: dict = {}
        self._lock = threading.Lock()

    def create(self, graph: Graph, params: PipelineParams, background: bool = True) -> Session:
        session_id = secrets.token_hex(8)
        session = Session(session_id, graph, params)
        with self._lock:
            self._sessions[session_id] = session
        if background:
            thread = threading.Thread(target=session.build, daemon=True)
            thread.start()
        else:
            session.build()
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionError("unknown session", f"no session {session_id!r}")
        return session


def prepare_graph(g: Graph, params: PipelineParams) -> Graph:
    return largest_component_subgraph(g) if params.largest_component else g
