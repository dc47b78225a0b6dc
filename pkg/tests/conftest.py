import pytest

from modview.generators import (
    barbell_cliques,
    gnp_random_graph,
    planted_cliques,
    two_level_cliques,
)


@pytest.fixture(scope="session")
def barbell():
    """Two triangles joined by one bridge edge; optimum Q = 5/14."""
    return barbell_cliques(3)


@pytest.fixture(scope="session")
def planted():
    """Four 5-cliques in a bridged cycle; optimum is the four cliques."""
    return planted_cliques(4, 5)


@pytest.fixture(scope="session")
def barbell_groups():
    """Twelve 2-clique groups; best level = groups, each splits into cliques."""
    return two_level_cliques(num_groups=12, cliques_per_group=2, clique_size=5)


@pytest.fixture(scope="session")
def dense_random():
    """G(60, 0.5): dense noise with no community structure."""
    return gnp_random_graph(60, 0.5, seed=17)
