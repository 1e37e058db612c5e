"""
Seeded random instances for oracle suites and the `gen` command.
"""
import logging

import numpy as np

from ordata.automata.nfa import Nfa, star_automaton
from ordata.automata.transducer import TreeTransducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton
from ordata.common.utils import nonempty_subsets
from ordata.core.profiles import ALL_PROFILES, ROOT_PROFILE
from ordata.core.trees import LabeledTree, OrderedDataTree
from ordata.odta.automaton import ODTA, WeakODTA, profile_alphabet

logger = logging.getLogger(__name__)

SIGMA = ('a', 'b', 'c')
GAMMA = ('g0', 'g1', 'g2')


def _pick(rs, items, p=0.5):
    """ Random subset of `items`, never empty. """
    items = list(items)
    chosen = [x for x in items if rs.rand() < p]
    return chosen or [items[rs.randint(len(items))]]


def random_shape(rs, size, sigma=SIGMA):
    """ Labeled tree with `size` nodes, every node attached to a uniformly chosen earlier one. """
    assert size >= 1, 'trees are nonempty'
    labels = [sigma[rs.randint(len(sigma))] for _ in range(size)]
    kids = [[] for _ in range(size)]
    for u in range(1, size):
        kids[rs.randint(u)].append(u)

    def nested(u):
        return labels[u], [nested(c) for c in kids[u]]

    return LabeledTree.from_nested(nested(0))


def random_tree(rs, size, sigma=SIGMA, max_value=None):
    shape = random_shape(rs, size, sigma)
    max_value = max_value or size
    values = tuple(int(v) for v in rs.randint(1, max_value + 1, size=size))
    return OrderedDataTree(shape.labels, shape.children, values)


def random_nfa(rs, symbols, n_states=2, density=0.5, name='s'):
    """ NFA over `symbols` with states name0.., initial name0, random transitions and final states. """
    states = tuple('{}{}'.format(name, i) for i in range(n_states))
    trans = frozenset((p, a, q) for p in states for a in symbols for q in states if rs.rand() < density)
    return Nfa(states, tuple(symbols), trans, {states[0]}, _pick(rs, states))


def _horizontal(rs, states, star=False, density=0.5):
    """ Star of a random state subset, or a random NFA over the states. """
    if star or rs.rand() < 0.3:
        return star_automaton(_pick(rs, states), name='h')
    return random_nfa(rs, states, n_states=int(rs.randint(1, 3)), density=density, name='h')


def random_tree_automaton(rs, n_states=2, sigma=SIGMA[:2], density=0.5, star=False):
    """ Tree automaton with random NFA horizontal languages (star-shaped with `star`). """
    states = tuple('q{}'.format(i) for i in range(n_states))
    horizontal = []
    for q in states:
        for a in sigma:
            if rs.rand() < density:
                continue
            horizontal.append(((q, a), _horizontal(rs, states, star, density)))
    if not horizontal:
        horizontal.append(((states[0], sigma[0]), star_automaton((), name='h')))
    return UnrankedTreeAutomaton(states, sigma, tuple(horizontal), _pick(rs, states))


def _value_automaton(rs, gamma, density):
    symbols = nonempty_subsets(gamma)
    return random_nfa(rs, symbols, n_states=2, density=density * 0.6)


def random_weak_odta(rs, n_states=2, sigma=SIGMA[:2], gamma=GAMMA[:2], density=0.5, star=False):
    """
    Weak ODTA with random horizontal languages, a two-state value automaton over
    the nonempty subsets of Γ and a random distinctness set.
    """
    base = random_tree_automaton(rs, n_states, sigma, density, star)
    outputs = set()
    for (q, a), _ in base.horizontal:
        for b in _pick(rs, gamma):
            outputs.add((q, a, b))
    tr = TreeTransducer(base, gamma, frozenset(outputs))
    gamma0 = frozenset(b for b in gamma if rs.rand() < 0.3)
    return WeakODTA(tr, _value_automaton(rs, gamma, density), gamma0)


def random_odta(rs, n_states=1, sigma=SIGMA[:1], gamma=GAMMA[:2], density=0.5):
    """
    ODTA whose transducer looks at profiles: every (state, label) has a random
    horizontal language kept for a random subset of profiles, and the outputs of a
    node depend on how its value relates to its parent and left sibling.
    """
    states = tuple('q{}'.format(i) for i in range(n_states))
    horizontal, outputs = [], set()
    for q in states:
        for a in sigma:
            h = _horizontal(rs, states, density=density)
            table = {}
            for p in ALL_PROFILES:
                if p != ROOT_PROFILE and rs.rand() < density * 0.3:
                    continue
                horizontal.append(((q, (a, p)), h))
                key = (p.parent, p.left)
                if key not in table:
                    table[key] = _pick(rs, gamma)
                outputs.update((q, (a, p), b) for b in table[key])
    base = UnrankedTreeAutomaton(states, profile_alphabet(sigma), tuple(horizontal), _pick(rs, states))
    tr = TreeTransducer(base, gamma, frozenset(outputs))
    gamma0 = frozenset(b for b in gamma if rs.rand() < 0.3)
    return ODTA(tr, _value_automaton(rs, gamma, density), gamma0)


def instances(kind, size, seed, count=1):
    """
    Yields `count` instances of `kind` (tree, weak or odta) from one RandomState(seed).

    For trees `size` is the node count, for automata the number of states.
    """
    rs = np.random.RandomState(seed)
    for _ in range(count):
        if kind == 'tree':
            yield random_tree(rs, size)
        elif kind == 'weak':
            yield random_weak_odta(rs, n_states=size)
        elif kind == 'odta':
            yield random_odta(rs, n_states=size)
        else:
            raise ValueError('unknown instance kind {}'.format(kind))
