from functools import lru_cache

from ordata.automata.nfa import Nfa
from ordata.automata.tree_automaton import UnrankedTreeAutomaton
from ordata.core.profiles import ABSENT, ALL_PROFILES, ROOT_PROFILE, triangle_ok


@lru_cache(maxsize=None)
def sibling_chain_nfa():
    """
    Horizontal language over profile triples accepting exactly the child sequences
    of some data tree: the first child has no left neighbour, the last none on the
    right, neighbouring triples agree on their shared edge and every
    parent/child/child triangle is consistent.
    """
    children = [p for p in ALL_PROFILES if p.parent != ABSENT]
    states = ('start',) + tuple(children)
    trans = set()
    for c in children:
        if c.left == ABSENT:
            trans.add(('start', c, c))
        if c.right == ABSENT:
            continue
        for d in children:
            if d.left == c.right and triangle_ok(c.parent, d.parent, c.right):
                trans.add((c, d, d))
    final = {'start'} | {c for c in children if c.right == ABSENT}
    return Nfa(states, ALL_PROFILES, frozenset(trans), {'start'}, final)


def profile_consistency_automaton(labels, profile_of=None):
    """
    Accepts the trees over `labels` whose profile components are those of some data tree.

    Parameters
    ----------
    labels: iterable
        alphabet of the automaton
    profile_of: callable
        extracts the profile triple of a label, default label[1] for (a, triple) labels

    Returns
    -------
        UnrankedTreeAutomaton whose states are profile triples
    """
    profile_of = (lambda lab: lab[1]) if profile_of is None else profile_of
    labels = tuple(labels)
    h = sibling_chain_nfa()
    horizontal = tuple(((profile_of(lab), lab), h) for lab in labels)
    return UnrankedTreeAutomaton(ALL_PROFILES, labels, horizontal, {ROOT_PROFILE})
