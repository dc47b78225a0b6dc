"""Configuration-model null hypothesis machinery.

Degree-preserving random graphs are produced by double-edge-swap
randomization of the observed graph, which keeps the degree sequence exact
and the graph simple (stub matching would have to discard self-loops and
multi-edges, distorting the degrees).  Running the maximizer on many such
graphs gives the null distribution of achievable modularity; the observed
clustering is significant only when it beats every null sample and the
add-one Monte Carlo p-value clears the significance level.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .graph import Graph
from .modularity import MaximizerConfig, greedy_maximize

DEFAULT_TRIALS = 100
DEFAULT_ALPHA = 0.01
SWAP_FACTOR = 10


class SignificanceError(ValueError):
    pass


def derive_seed(master: int, *path) -> int:
    """Stable 64-bit sub-seed from a master seed and a derivation path.

    Hash-based so every stage and trial of a pipeline draws independent,
    reproducible randomness from one user-facing seed.
    """
    text = "/".join([str(master), *(str(p) for p in path)])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class NullDistribution:
    """Max-modularity scores of the clusterer on degree-preserving random
    graphs, plus the derived significance threshold (their maximum)."""

    samples: tuple
    trials: int
    threshold: float
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise SignificanceError("trials must be >= 1")
        if len(self.samples) != self.trials:
            raise SignificanceError("samples length must equal trials")
        for s in self.samples:
            if not (-1.0 <= s < 1.0):
                raise SignificanceError(f"null sample {s} outside [-1, 1)")

    @classmethod
    def from_samples(cls, samples, seed: int) -> "NullDistribution":
        samples = tuple(float(s) for s in samples)
        return cls(samples=samples, trials=len(samples), threshold=max(samples), seed=seed)

    def with_threshold(self, threshold: float) -> "NullDistribution":
        """Override the threshold with an externally supplied value (e.g. a
        closed-form large-graph estimate)."""
        return replace(self, threshold=float(threshold))


def sample_configuration_graph(
    deg, seed: int, template: Graph, swap_factor: int = SWAP_FACTOR
) -> Graph:
    """Uniform-ish simple graph with exactly the degree sequence ``deg``.

    Runs ``swap_factor * m`` attempted double edge swaps on the template:
    a swap replaces edges {a,b},{c,d} with {a,c},{b,d} and is applied only
    if it creates no self-loop and no duplicate edge.  Rejected proposals
    count as attempts.  Deterministic per seed.
    """
    if tuple(deg) != tuple(template.degrees):
        raise SignificanceError("template does not realize the requested degree sequence")
    m = template.edge_count
    if m < 2:
        return template
    edges = list(template.edges)
    edge_set = set(edges)
    attempts = swap_factor * m
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, m, size=(attempts, 2))
    flip = rng.integers(0, 2, size=(attempts, 2))
    for t in range(attempts):
        i = int(idx[t, 0])
        j = int(idx[t, 1])
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if flip[t, 0]:
            a, b = b, a
        if flip[t, 1]:
            c, d = d, c
        if a == c or b == d:
            continue
        e1 = (a, c) if a < c else (c, a)
        e2 = (b, d) if b < d else (d, b)
        if e1 in edge_set or e2 in edge_set:
            continue
        edge_set.remove(edges[i])
        edge_set.remove(edges[j])
        edge_set.add(e1)
        edge_set.add(e2)
        edges[i] = e1
        edges[j] = e2
    return Graph(template.node_count, edges, tokens=template.tokens)


def _null_trial(g: Graph, cfg: MaximizerConfig, master_seed: int, index: int, swap_factor: int) -> float:
    sub_seed = derive_seed(master_seed, "trial", index)
    sample = sample_configuration_graph(g.degrees, sub_seed, g, swap_factor=swap_factor)
    return greedy_maximize(sample, cfg).modularity


def null_distribution(
    g: Graph,
    trials: int = DEFAULT_TRIALS,
    cfg: MaximizerConfig | None = None,
    seed: int = 0,
    jobs: int = 1,
    swap_factor: int = SWAP_FACTOR,
) -> NullDistribution:
    """Null modularity distribution over ``trials`` configuration samples.

    Trial i gets a sub-seed derived from (seed, i), so trials are independent
    and the result is identical whether they run sequentially or on a process
    pool (samples are ordered by trial index either way).
    """
    if trials < 1:
        raise SignificanceError("trials must be >= 1")
    cfg = cfg or MaximizerConfig()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(_null_trial, g, cfg, seed, i, swap_factor)
                for i in range(trials)
            ]
            samples = [f.result() for f in futures]
    else:
        samples = [_null_trial(g, cfg, seed, i, swap_factor) for i in range(trials)]
    return NullDistribution.from_samples(samples, seed=seed)


def p_value(nd: NullDistribution, q: float) -> float:
    """Add-one Monte Carlo estimate: (1 + #{samples >= q}) / (trials + 1)."""
    exceed = sum(1 for s in nd.samples if s >= q)
    return (1 + exceed) / (nd.trials + 1)


def effective_alpha(nd: NullDistribution, alpha: float = DEFAULT_ALPHA) -> float:
    """Smallest usable significance level for this trial count.

    The add-one estimator cannot go below 1/(trials+1); with fewer than
    1/alpha trials the criterion therefore degrades to "strictly above the
    observed null maximum".
    """
    return max(alpha, 1.0 / (nd.trials + 1))


def is_significant(nd: NullDistribution, q: float, alpha: float = DEFAULT_ALPHA) -> bool:
    """True iff no null sample reaches ``q`` and the p-value clears alpha
    (at the level actually resolvable with this trial count)."""
    if not (0.0 < alpha < 1.0):
        raise SignificanceError("alpha must be in (0, 1)")
    return q > nd.threshold and p_value(nd, q) <= effective_alpha(nd, alpha)


def null_to_text(nd: NullDistribution) -> str:
    """One sample per line with a reproducibility header."""
    lines = [
        f"# trials={nd.trials}",
        f"# seed={nd.seed}",
        f"# threshold={nd.threshold!r}",
    ]
    lines.extend(repr(s) for s in nd.samples)
    return "\n".join(lines) + "\n"


def null_from_text(text: str) -> NullDistribution:
    seed = 0
    threshold = None
    samples = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition("=")
            if key == "seed":
                seed = int(value)
            elif key == "threshold":
                threshold = float(value)
            continue
        samples.append(float(line))
    nd = NullDistribution.from_samples(samples, seed=seed)
    if threshold is not None and threshold != nd.threshold:
        nd = nd.with_threshold(threshold)
    return nd
