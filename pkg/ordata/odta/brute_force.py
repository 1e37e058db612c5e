import itertools
import logging

from tqdm import tqdm

from ordata import DEFAULT_MEMBER_BUDGET
from ordata.automata.tree_automaton import all_trees_automaton, ta_enumerate
from ordata.common.errors import OrdataError
from ordata.core.trees import OrderedDataTree
from ordata.odta.automaton import UNKNOWN, ExtendedWeakODTA, StringWeakODTA
from ordata.odta.membership import member

logger = logging.getLogger(__name__)


def rank_assignments(n, max_values):
    """ Value tuples for n nodes using exactly the values 1..m, for every m up to max_values. """
    for m in range(1, min(n, max_values) + 1):
        for values in itertools.product(range(1, m + 1), repeat=n):
            if len(set(values)) == m:
                yield values


def candidate_shapes(s, max_nodes):
    """ Labeled trees worth trying: those of the transducer's base automaton for weak ODTA, all trees otherwise. """
    base = s.base if isinstance(s, ExtendedWeakODTA) else s
    if not base.profiled:
        return ta_enumerate(base.transducer.base, max_nodes)
    return ta_enumerate(all_trees_automaton(base.sigma), max_nodes)


def brute_force_search(s, max_nodes=4, max_values=4, progress=False, budget=DEFAULT_MEMBER_BUDGET):
    """
    Exhaustive search for a member of L(s).

    Tries every tree up to `max_nodes` nodes with every value assignment canonical
    by rank. Acceptance only depends on how values compare, so values 1..n cover
    all trees of n nodes once max_values >= max_nodes.

    Returns
    -------
        the first accepted OrderedDataTree, or None
    """
    if isinstance(s, StringWeakODTA):
        raise OrdataError('brute force search does not cover string data')

    unknown = 0
    for shape, _ in tqdm(candidate_shapes(s, max_nodes), disable=not progress, desc='shapes'):
        for values in rank_assignments(len(shape), max_values):
            t = OrderedDataTree(shape.labels, shape.children, values)
            verdict = member(s, t, budget)
            if verdict is UNKNOWN:
                unknown += 1
                continue
            if verdict:
                return t
    if unknown:
        logger.warning('{} membership checks ran out of budget'.format(unknown))
    return None
