import pathlib
from itertools import product

import pytest

from redeploy import STAY, Transfer, is_feasible, parse_instance, \
    parse_typed, random_suite

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load_instance(name):
    return parse_instance((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def small_instance():
    """Two surplus schools, three deficit schools, three teachers; the
    fractional optimum is (1, 3/2, 3/2) and the integral one {2,1,1}."""
    return load_instance("example_small.json")


@pytest.fixture(scope="session")
def rounding_instance():
    """Seven deficit schools of depth 5 where naive rounding of the
    fractional optimum is not achievable."""
    return load_instance("example_rounding.json")


@pytest.fixture(scope="session")
def chain_instance():
    """Surplus-to-surplus chains: t3 moving into s1 frees a second
    departure toward d1."""
    return load_instance("example_chain.json")


@pytest.fixture(scope="session")
def chain_base_instance():
    return load_instance("example_chain_base.json")


@pytest.fixture(scope="session")
def subjects_instance():
    return parse_typed((FIXTURES / "example_subjects.json").read_text())


@pytest.fixture(scope="session")
def dominance_suite():
    """200 small instances for the oracle-agreement suites."""
    return random_suite(200, seed=20250, max_surplus=3, max_deficit=5,
                        max_teachers=6, max_alpha=4, max_beta=4)


@pytest.fixture(scope="session")
def game_suite():
    """50 instances for the exhaustive game-shape suites."""
    return random_suite(50, seed=20261, max_surplus=3, max_deficit=5,
                        max_teachers=6, max_alpha=4, max_beta=4)


@pytest.fixture(scope="session")
def audit_suite():
    """100 instances small enough for exhaustive manipulation audits."""
    return random_suite(100, seed=20299, max_surplus=3, max_deficit=4,
                        max_teachers=5, max_alpha=4, max_beta=4)


def naive_enumerate(instance):
    """Product-space enumeration filtered by the public feasibility check.

    Shares nothing with the oracle's pruned recursion; used to cross-check
    its output.
    """
    options = []
    for teacher in sorted(instance.teachers, key=lambda t: t.id):
        accept = [d for d in instance.deficit_ids if d in teacher.acceptable]
        options.append([(teacher.id, dest) for dest in accept + [STAY]])
    for combo in product(*options):
        transfer = Transfer.from_mapping(dict(combo))
        if is_feasible(instance, transfer):
            yield transfer
