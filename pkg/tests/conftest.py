import pytest

from ordata.core.formats import parse_tree
from ordata.core.trees import OrderedDataTree, StringDataTree

# 11 nodes over a, b, c with values 1, 2, 4, 6, 7
PROFILE_TREE = '(a@2 (b@1) (c@2 (b@2 (c@1)) (b@4 (c@6)) (a@7 (b@7))) (a@4) (a@6))'

STRING_TREE = ('(a@"01" (b@"0100") (c@"01011" (b@"01" (c@"010011")) (b@"010011" (c@"010000")) '
               '(a@"0101" (b@"010000"))) (a@"010011") (a@"0101"))')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: randomized suites against brute force; deselect with -m "not slow"')


@pytest.fixture
def profile_tree():
    t = parse_tree(PROFILE_TREE)
    assert isinstance(t, OrderedDataTree)
    return t


@pytest.fixture
def string_tree():
    t = parse_tree(STRING_TREE)
    assert isinstance(t, StringDataTree)
    return t


@pytest.fixture
def chain():
    """ (a,5) above (a,5) """
    return OrderedDataTree(('a', 'a'), ((1,), ()), (5, 5))
