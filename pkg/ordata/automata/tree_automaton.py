import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from ordata.automata.nfa import Nfa, star_automaton
from ordata.common.errors import AlphabetMismatchError, OrdataError, UnknownSymbolError
from ordata.common.utils import canonical_sorted
from ordata.core.trees import LabeledTree

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class UnrankedTreeAutomaton(object):
    """
    Unranked tree automaton with horizontal languages given as NFAs over states.

    `horizontal` maps (q, a) to the NFA of admissible child-state words; pairs
    without an entry have the empty horizontal language. Several pairs may share one
    NFA object.
    """

    states: tuple
    alphabet: tuple
    horizontal: tuple
    final: frozenset

    def __post_init__(self):
        if isinstance(self.horizontal, dict):
            object.__setattr__(self, 'horizontal', tuple(self.horizontal.items()))
        object.__setattr__(self, 'states', tuple(self.states))
        object.__setattr__(self, 'alphabet', tuple(self.alphabet))
        object.__setattr__(self, 'horizontal', tuple(self.horizontal))
        object.__setattr__(self, 'final', frozenset(self.final))

        states = set(self.states)
        symbols = set(self.alphabet)
        if len(states) != len(self.states) or len(symbols) != len(self.alphabet):
            raise OrdataError('duplicate states or symbols in tree automaton')
        if not self.final <= states:
            raise OrdataError('final states must be declared')
        for (q, a), h in self.horizontal:
            if q not in states:
                raise OrdataError('horizontal language for undeclared state {!r}'.format(q))
            if a not in symbols:
                raise UnknownSymbolError(a, 'tree automaton alphabet')
            if not set(h.alphabet) <= states:
                raise OrdataError('horizontal language of ({}, {}) reads undeclared states'.format(q, a))

    @cached_property
    def delta(self):
        return dict(self.horizontal)

    @cached_property
    def symbol_set(self):
        return frozenset(self.alphabet)

    @cached_property
    def by_label(self):
        """ label -> [(q, nfa)] in state order """
        order = {q: i for i, q in enumerate(self.states)}
        table = defaultdict(list)
        for (q, a), h in self.horizontal:
            table[a].append((q, h))
        return {a: sorted(v, key=lambda e: order[e[0]]) for a, v in table.items()}

    def check_labels(self, t):
        for lab in t.labels:
            if lab not in self.symbol_set:
                raise UnknownSymbolError(lab, 'tree automaton alphabet')


def _forward_sets(h, child_sets):
    """ Subset simulation of a horizontal NFA over a word of state sets. """
    current = h.initial
    trace = [current]
    for options in child_sets:
        nxt = set()
        for p in current:
            for r in options:
                nxt |= h.delta.get((p, r), frozenset())
        current = frozenset(nxt)
        trace.append(current)
        if not current:
            break
    return trace


def reachable_sets(a, t, allowed=None):
    """ Bottom-up: the states each node can be assigned in some run on its subtree. """
    a.check_labels(t)
    sets = [frozenset()] * len(t)
    for u in t.postorder():
        kids = [sets[c] for c in t.children[u]]
        good = []
        for q, h in a.by_label.get(t.labels[u], []):
            if allowed is not None and q not in allowed[u]:
                continue
            trace = _forward_sets(h, kids)
            if len(trace) == len(kids) + 1 and trace[-1] & h.final:
                good.append(q)
        sets[u] = frozenset(good)
    return sets


def _choose_children(h, kids, target_final):
    """ Picks child states, one per child, such that the horizontal NFA accepts. """
    trace = _forward_sets(h, kids)
    finals = canonical_sorted(trace[-1] & target_final)
    want = {finals[0]}
    chosen = [None] * len(kids)
    for j in range(len(kids) - 1, -1, -1):
        found = None
        for p in canonical_sorted(trace[j]):
            for r in canonical_sorted(kids[j]):
                if h.delta.get((p, r), frozenset()) & want:
                    found = (p, r)
                    break
            if found:
                break
        assert found is not None, 'forward trace inconsistent with backward choice'
        chosen[j] = found[1]
        want = {found[0]}
    return chosen


def ta_run(a, t, allowed=None):
    """
    An accepting run of `a` on the labeled tree `t`, or None.

    Parameters
    ----------
    a: UnrankedTreeAutomaton
        automaton to run
    t: LabeledTree
        tree whose labels are in a's alphabet
    allowed: list of sets
        optional per-node restriction of the states a run may use

    Returns
    -------
        tuple mapping each node to its state, or None
    """
    sets = reachable_sets(a, t, allowed)
    roots = [q for q in a.states if q in sets[0] and q in a.final]
    if not roots:
        return None

    run = [None] * len(t)
    run[0] = roots[0]
    for u in t.nodes():
        kids = [sets[c] for c in t.children[u]]
        h = a.delta[(run[u], t.labels[u])]
        for c, q in zip(t.children[u], _choose_children(h, kids, h.final)):
            run[c] = q
    return tuple(run)


def ta_accepts(a, t, allowed=None):
    sets = reachable_sets(a, t, allowed)
    return bool(sets[0] & a.final)


def check_run(a, t, run):
    """ Independent check of the run conditions. """
    if run is None or len(run) != len(t) or run[0] not in a.final:
        return False
    for u in t.nodes():
        h = a.delta.get((run[u], t.labels[u]))
        if h is None:
            return False
        current = h.initial
        for c in t.children[u]:
            current = h.step(current, run[c])
        if not current & h.final:
            return False
    return True


def productive_states(a):
    """ States q such that some tree has a run assigning q to its root. """
    productive = set()
    changed = True
    while changed:
        changed = False
        for (q, lab), h in a.horizontal:
            if q in productive:
                continue
            if _accepts_over(h, productive):
                productive.add(q)
                changed = True
    return productive


def _accepts_over(h, symbols):
    seen = set(h.initial)
    stack = list(seen)
    while stack:
        p = stack.pop()
        if p in h.final:
            return True
        for r, p2 in h.outgoing.get(p, []):
            if r in symbols and p2 not in seen:
                seen.add(p2)
                stack.append(p2)
    return False


def ta_empty(a):
    """ True iff L(a) is empty. """
    return not (productive_states(a) & a.final)


def ta_enumerate(a, max_nodes, distinct=True, limit=None):
    """
    Accepted trees with accepting runs, by size ascending.

    Yields (LabeledTree, run) pairs. With `distinct`, every tree is yielded once
    with its first run.
    """
    productive = productive_states(a)
    memo = {}
    hedge_memo = {}
    by_state = defaultdict(list)
    for (q, lab), h in a.horizontal:
        by_state[q].append((lab, h))
    order = {lab: i for i, lab in enumerate(a.alphabet)}
    for q in by_state:
        by_state[q].sort(key=lambda e: order[e[0]])

    def trees(q, n):
        # subtrees of exactly n nodes whose root takes state q
        key = (q, n)
        if key in memo:
            return memo[key]
        out = []
        for lab, h in by_state.get(q, []):
            for hedge in hedges(h, h.initial, n - 1):
                out.append((lab, q, hedge))
        memo[key] = out
        return out

    def hedges(h, current, n):
        if n == 0:
            return [()] if current & h.final else []
        key = (id(h), current, n)
        if key in hedge_memo:
            return hedge_memo[key]
        # only states some current state can read next
        readable = canonical_sorted({r for p in current for r, _ in h.outgoing.get(p, []) if r in productive})
        out = []
        for size in range(1, n + 1):
            for r in readable:
                nxt = h.step(current, r)
                if not nxt:
                    continue
                rest = hedges(h, nxt, n - size)
                if not rest:
                    continue
                for first in trees(r, size):
                    for tail in rest:
                        out.append((first,) + tail)
        hedge_memo[key] = out
        return out

    seen = set()
    emitted = 0
    for n in range(1, max_nodes + 1):
        for q in a.states:
            if q not in a.final:
                continue
            for sub in trees(q, n):
                tree, run = _flatten(sub)
                key = (tree.labels, tree.children)
                if distinct and key in seen:
                    continue
                seen.add(key)
                yield tree, run
                emitted += 1
                if limit is not None and emitted >= limit:
                    return


def _flatten(sub):
    labels, states, children = [], [], []

    def visit(node):
        lab, q, kids = node
        u = len(labels)
        labels.append(lab)
        states.append(q)
        children.append([])
        for k in kids:
            children[u].append(visit(k))
        return u

    visit(sub)
    return LabeledTree(tuple(labels), tuple(tuple(c) for c in children)), tuple(states)


def all_trees_automaton(alphabet, state='q'):
    """ Accepts every tree over `alphabet`. """
    h = star_automaton([state], name='h')
    return UnrankedTreeAutomaton((state,), tuple(alphabet), tuple(((state, a), h) for a in alphabet), {state})


def empty_tree_automaton(alphabet):
    return UnrankedTreeAutomaton(('q',), tuple(alphabet), (), frozenset())


def _same_alphabet(a1, a2):
    if set(a1.alphabet) != set(a2.alphabet):
        raise AlphabetMismatchError('tree automata over different alphabets: {} vs {}'.format(
            canonical_sorted(a1.alphabet), canonical_sorted(a2.alphabet)))


def ta_product_union(a1, a2):
    """ L(a1) ∪ L(a2); states are tagged (1, q) and (2, q). """
    _same_alphabet(a1, a2)
    horizontal = []
    for tag, a in [(1, a1), (2, a2)]:
        cache = {}
        for (q, lab), h in a.horizontal:
            if id(h) not in cache:
                cache[id(h)] = Nfa(h.states, tuple((tag, r) for r in h.alphabet),
                                   frozenset((p, (tag, r), p2) for p, r, p2 in h.transitions), h.initial, h.final)
            horizontal.append((((tag, q), lab), cache[id(h)]))
    states = tuple((1, q) for q in a1.states) + tuple((2, q) for q in a2.states)
    final = frozenset((1, q) for q in a1.final) | frozenset((2, q) for q in a2.final)
    return UnrankedTreeAutomaton(states, a1.alphabet, tuple(horizontal), final)


def horizontal_product(h1, h2, pairs):
    """ Product of two horizontal NFAs reading pairs of states. """
    trans = frozenset(((p1, p2), (r1, r2), (s1, s2))
                      for p1, r1, s1 in h1.transitions
                      for p2, r2, s2 in h2.transitions)
    states = tuple((p1, p2) for p1 in h1.states for p2 in h2.states)
    return Nfa(states, pairs, trans,
               frozenset((p1, p2) for p1 in h1.initial for p2 in h2.initial),
               frozenset((p1, p2) for p1 in h1.final for p2 in h2.final))


def ta_product_intersection(a1, a2):
    """ L(a1) ∩ L(a2) over pair states (q1, q2). """
    _same_alphabet(a1, a2)
    pairs = tuple((q1, q2) for q1 in a1.states for q2 in a2.states)
    cache = {}
    horizontal = []
    for lab in a1.alphabet:
        for q1, h1 in a1.by_label.get(lab, []):
            for q2, h2 in a2.by_label.get(lab, []):
                key = (id(h1), id(h2))
                if key not in cache:
                    cache[key] = horizontal_product(h1, h2, pairs)
                horizontal.append((((q1, q2), lab), cache[key]))
    final = frozenset((q1, q2) for q1 in a1.final for q2 in a2.final)
    return UnrankedTreeAutomaton(pairs, a1.alphabet, tuple(horizontal), final)
