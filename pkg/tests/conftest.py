import pytest
from hypothesis import HealthCheck, settings

from lmsearch import domains as D

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def small_instances():
    """A few instances of every domain that the tree oracle can enumerate."""
    out = [D.gen_chain(s, max_d=60) for s in range(4)]
    out += [D.gen_coconut(s, max_D=40, max_q=4) for s in range(4)]
    out += [D.gen_tiles(s, moves=14) for s in range(4)]
    out += [D.gen_pancake(s, size=7) for s in range(4)]
    out += [D.random_tree(s) for s in range(4)]
    return out


@pytest.fixture(scope="session")
def chain9():
    return D.Chain(9)


@pytest.fixture(scope="session")
def binary3():
    # complete binary tree of height 3, f = depth + 1, goal at the leftmost leaf
    return D.complete_tree(2, 4, goal=(0, 0, 0))
