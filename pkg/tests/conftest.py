import pytest

from amalgamkit import catalog
from amalgamkit.bass_serre.domain import FundamentalDomain, compute_fundamental_domain
from amalgamkit.bass_serre.graph import induced_graph_of_groups
from amalgamkit.constants import Budgets

BUDGETS = Budgets(hball=5, depth=4, radius=6, memory=2_000_000)


@pytest.fixture(scope="session")
def budgets():
    return BUDGETS


@pytest.fixture(scope="session")
def sl2z():
    return catalog.get("sl2z").load()


@pytest.fixture(scope="session")
def surface():
    return catalog.get("surface").load()


@pytest.fixture(scope="session")
def centralizer():
    return catalog.get("centralizer").load()


def _domain(P, gens) -> FundamentalDomain:
    result = compute_fundamental_domain(P, gens, BUDGETS)
    assert isinstance(result, FundamentalDomain), result
    return result


@pytest.fixture(scope="session")
def sl2z_domain(sl2z):
    return _domain(sl2z, ["sr"])


@pytest.fixture(scope="session")
def centralizer_domain(centralizer):
    return _domain(centralizer, ["b", "x"])


@pytest.fixture(scope="session")
def surface_domain(surface):
    return _domain(surface, ["ab", "cd"])


@pytest.fixture(scope="session")
def sl2z_graph(sl2z_domain):
    return induced_graph_of_groups(sl2z_domain)


@pytest.fixture(scope="session")
def centralizer_graph(centralizer_domain):
    return induced_graph_of_groups(centralizer_domain)


@pytest.fixture(scope="session")
def surface_cores_domain(surface):
    return _domain(surface, ["a", "c"])


@pytest.fixture(scope="session")
def surface_cores_graph(surface_cores_domain):
    return induced_graph_of_groups(surface_cores_domain)


@pytest.fixture(scope="session")
def surface_conjugated_graph(surface):
    return induced_graph_of_groups(_domain(surface, ["a", "bcb'"]))


@pytest.fixture(scope="session")
def surface_free_domain(surface):
    return _domain(surface, ["ac", "bd"])
