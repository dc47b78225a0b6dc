"""Per-cluster categorical enrichment.

Each cluster's attribute distribution is compared against the whole graph's
by a chi-squared goodness-of-fit test (expected counts are the cluster size
times the global proportions).  Pearson residuals give a signed per-category
enrichment score for coloring: positive means over-represented.

The chi-squared upper tail is the regularized upper incomplete gamma
Q(dof/2, chi2/2), implemented here directly (power series for the lower
tail, continued fraction for the upper) so results are bit-reproducible and
the core package needs no numerical dependency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph
from .modularity import Partition

# Expected counts below this make the chi-squared approximation unreliable;
# affected clusters are flagged rather than corrected.
LOW_EXPECTED = 1.0
_MAX_ITER = 500
_EPS = 1e-15


class StatsError(ValueError):
    pass


def _lower_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series (x < a+1)."""
    term = 1.0 / a
    total = term
    for n in range(1, _MAX_ITER):
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _upper_continued_fraction(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by modified Lentz
    continued fraction (x >= a+1)."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = Γ(a, x)/Γ(a), the normalized upper incomplete gamma."""
    if a <= 0:
        raise StatsError("shape parameter must be positive")
    if x < 0:
        raise StatsError("argument must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _lower_series(a, x)
    return _upper_continued_fraction(a, x)


def chi2_sf(chi2: float, dof: int) -> float:
    """Upper-tail probability of the chi-squared distribution."""
    if dof < 1:
        raise StatsError("degrees of freedom must be >= 1")
    if chi2 < 0:
        raise StatsError("chi-squared statistic must be non-negative")
    return regularized_gamma_q(dof / 2.0, chi2 / 2.0)


@dataclass(frozen=True)
class ClusterStats:
    """Goodness-of-fit result for one cluster.

    ``degenerate`` marks clusters where fewer than two categories remain
    (dof <= 0; p is 1 by convention).  ``low_confidence`` marks clusters
    with any expected count below 1.
    """

    cluster_id: int
    size: int
    chi2: float
    dof: int
    p: float
    counts: dict  # category -> observed
    residuals: dict  # category -> (O - E) / sqrt(E)
    expected: dict  # category -> E
    degenerate: bool
    low_confidence: bool


@dataclass(frozen=True)
class AttributeStats:
    attribute: str
    categories: tuple  # retained categories (global count > 0), sorted
    global_counts: dict  # category -> count over the whole graph
    clusters: dict  # cluster id -> ClusterStats

    def cluster(self, cluster_id: int) -> ClusterStats:
        try:
            return self.clusters[cluster_id]
        except KeyError:
            raise StatsError(f"no stats for cluster {cluster_id}") from None


def cluster_chi2(g: Graph, p: Partition, attribute: str) -> AttributeStats:
    """Chi-squared goodness-of-fit of every cluster against the global
    category distribution of ``attribute``."""
    if attribute not in g.attributes:
        raise StatsError(f"unknown attribute {attribute!r}")
    values = g.attributes[attribute]
    global_counts: dict = {}
    for val in values:
        global_counts[val] = global_counts.get(val, 0) + 1
    categories = tuple(sorted(c for c, n in global_counts.items() if n > 0))
    dof = len(categories) - 1
    n_total = g.node_count

    per_cluster: dict = {}
    for cid, members in enumerate(p.clusters()):
        size = len(members)
        counts = {c: 0 for c in categories}
        for v in members:
            counts[values[v]] += 1
        expected = {c: size * global_counts[c] / n_total for c in categories}
        residuals = {}
        chi2 = 0.0
        for c in categories:
            e = expected[c]
            r = (counts[c] - e) / math.sqrt(e)
            residuals[c] = r
            chi2 += r * r
        degenerate = dof <= 0
        pval = 1.0 if degenerate else chi2_sf(chi2, dof)
        per_cluster[cid] = ClusterStats(
            cluster_id=cid,
            size=size,
            chi2=chi2,
            dof=dof,
            p=pval,
            counts=counts,
            residuals=residuals,
            expected=expected,
            degenerate=degenerate,
            low_confidence=any(e < LOW_EXPECTED for e in expected.values()),
        )
    return AttributeStats(
        attribute=attribute,
        categories=categories,
        global_counts=dict(global_counts),
        clusters=per_cluster,
    )


def pearson_residual(stats: AttributeStats, cluster_id: int, category: str) -> float:
    """Signed enrichment of one category in one cluster."""
    cs = stats.cluster(cluster_id)
    if category not in cs.residuals:
        raise StatsError(
            f"category {category!r} not retained for attribute {stats.attribute!r}"
        )
    return cs.residuals[category]


def stats_table(stats: AttributeStats) -> str:
    """Tabular export: one line per cluster plus a residual matrix."""
    lines = [f"# attribute={stats.attribute} test=goodness-of-fit"]
    header = ["cluster", "n", "chi2", "dof", "p", "flags"]
    lines.append("\t".join(header))
    for cid in sorted(stats.clusters):
        cs = stats.clusters[cid]
        flags = []
        if cs.degenerate:
            flags.append("degenerate")
        if cs.low_confidence:
            flags.append("low-confidence")
        lines.append(
            "\t".join(
                [
                    str(cid),
                    str(cs.size),
                    repr(cs.chi2),
                    str(cs.dof),
                    repr(cs.p),
                    ",".join(flags) or "-",
                ]
            )
        )
    lines.append("# residuals\t" + "\t".join(stats.categories))
    for cid in sorted(stats.clusters):
        cs = stats.clusters[cid]
        lines.append(
            str(cid) + "\t" + "\t".join(repr(cs.residuals[c]) for c in stats.categories)
        )
    return "\n".join(lines) + "\n"
