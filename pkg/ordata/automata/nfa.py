from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property

from ordata.common.errors import CapExceeded, OrdataError, UnknownSymbolError
from ordata.common.utils import canonical_sorted


@dataclass(frozen=True, eq=False)
class Nfa(object):
    """
    Nondeterministic finite word automaton without epsilon transitions.

    Symbols may be any hashable value; value automata read frozensets of output labels.
    """

    states: tuple
    alphabet: tuple
    transitions: frozenset
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        object.__setattr__(self, 'states', tuple(self.states))
        object.__setattr__(self, 'alphabet', tuple(self.alphabet))
        object.__setattr__(self, 'transitions', frozenset(self.transitions))
        object.__setattr__(self, 'initial', frozenset(self.initial))
        object.__setattr__(self, 'final', frozenset(self.final))

        states = set(self.states)
        symbols = set(self.alphabet)
        if len(states) != len(self.states):
            raise OrdataError('duplicate nfa states')
        for p, a, q in self.transitions:
            if p not in states or q not in states:
                raise OrdataError('transition ({}, {}, {}) references undeclared state'.format(p, a, q))
            if a not in symbols:
                raise UnknownSymbolError(a, 'nfa alphabet')
        if not self.initial <= states or not self.final <= states:
            raise OrdataError('initial and final states must be declared')

    @cached_property
    def symbol_set(self):
        return frozenset(self.alphabet)

    @cached_property
    def delta(self):
        d = defaultdict(set)
        for p, a, q in self.transitions:
            d[(p, a)].add(q)
        return {k: frozenset(v) for k, v in d.items()}

    @cached_property
    def outgoing(self):
        out = defaultdict(list)
        for p, a, q in canonical_sorted(self.transitions):
            out[p].append((a, q))
        return dict(out)

    def knows(self, sym):
        return sym in self.symbol_set

    def step(self, states, sym):
        nxt = set()
        for p in states:
            nxt |= self.delta.get((p, sym), frozenset())
        return frozenset(nxt)

    def accepts_states(self, states):
        return bool(self.final & states)


@dataclass(frozen=True, eq=False)
class CountingNfa(Nfa):
    """
    Nfa whose transitions may carry a count key. Parikh formulas of tree automata
    count every use of a marked transition in that key.

    marks: ((p, a, q), key) pairs
    """

    marks: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, 'marks', tuple(self.marks))
        for t, _ in self.marks:
            if t not in self.transitions:
                raise OrdataError('mark on undeclared transition {}'.format(t))

    @cached_property
    def mark_of(self):
        return dict(self.marks)

    def mark_keys(self):
        return frozenset(self.mark_of.values())


class PredicateNfa(object):
    """
    One-state automaton accepting (P)* for a symbol predicate P, with the alphabet
    never materialized. Supports membership only.
    """

    def __init__(self, predicate, description='P*'):
        self.predicate = predicate
        self.description = description
        self.states = ('p',)
        self.initial = frozenset(['p'])
        self.final = frozenset(['p'])

    @property
    def alphabet(self):
        raise CapExceeded('alphabet', 'materialization', 'alphabet of {} is not materialized'.format(self.description))

    @property
    def transitions(self):
        raise CapExceeded('alphabet', 'materialization', 'alphabet of {} is not materialized'.format(self.description))

    def knows(self, sym):
        return isinstance(sym, frozenset)

    def step(self, states, sym):
        if 'p' in states and self.predicate(sym):
            return self.initial
        return frozenset()

    def accepts_states(self, states):
        return 'p' in states


def nfa_member(m, w):
    """ True iff the word `w` is accepted by `m`. """
    current = m.initial
    for sym in w:
        if not m.knows(sym):
            raise UnknownSymbolError(sym, 'nfa alphabet')
        current = m.step(current, sym)
    return m.accepts_states(current)


def reachable_states(m, start=None):
    seen = set(m.initial if start is None else start)
    queue = deque(seen)
    while queue:
        p = queue.popleft()
        for _, q in m.outgoing.get(p, []):
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def nfa_empty(m):
    """ True iff L(m) is empty. """
    return not (reachable_states(m) & m.final)


def nfa_shortest_word(m):
    """ A shortest accepted word, or None if the language is empty. """
    prev = {p: None for p in m.initial}
    queue = deque(canonical_sorted(m.initial))
    while queue:
        p = queue.popleft()
        if p in m.final:
            word = []
            while prev[p] is not None:
                p, a = prev[p]
                word.append(a)
            return tuple(reversed(word))
        for a, q in m.outgoing.get(p, []):
            if q not in prev:
                prev[q] = (p, a)
                queue.append(q)
    return None


def nfa_map_symbols(m, f, alphabet=None):
    """ Renames symbols through `f`. """
    alphabet = [f(a) for a in m.alphabet] if alphabet is None else alphabet
    return Nfa(m.states, tuple(dict.fromkeys(alphabet)), frozenset((p, f(a), q) for p, a, q in m.transitions),
               m.initial, m.final)


def nfa_map_states(m, f):
    return Nfa(tuple(f(p) for p in m.states), m.alphabet, frozenset((f(p), a, f(q)) for p, a, q in m.transitions),
               frozenset(f(p) for p in m.initial), frozenset(f(p) for p in m.final))


def nfa_union(m1, m2):
    """ Disjoint union; states are tagged (1, p) and (2, p). """
    a = nfa_map_states(m1, lambda p: (1, p))
    b = nfa_map_states(m2, lambda p: (2, p))
    alphabet = tuple(dict.fromkeys(m1.alphabet + m2.alphabet))
    return Nfa(a.states + b.states, alphabet, a.transitions | b.transitions, a.initial | b.initial,
               a.final | b.final)


def nfa_product(m1, m2, combine=None):
    """
    Synchronous product. `combine(a, b)` returns the product symbol for a pair of
    component symbols or None if the pair cannot be read together; by default only
    equal symbols are combined (intersection).
    """
    combine = (lambda a, b: a if a == b else None) if combine is None else combine

    states, trans = set(), set()
    alphabet = []
    queue = deque((p, q) for p in canonical_sorted(m1.initial) for q in canonical_sorted(m2.initial))
    states.update(queue)
    while queue:
        p, q = queue.popleft()
        for a, p2 in m1.outgoing.get(p, []):
            for b, q2 in m2.outgoing.get(q, []):
                c = combine(a, b)
                if c is None:
                    continue
                alphabet.append(c)
                trans.add(((p, q), c, (p2, q2)))
                if (p2, q2) not in states:
                    states.add((p2, q2))
                    queue.append((p2, q2))

    states = canonical_sorted(states)
    return Nfa(tuple(states), tuple(dict.fromkeys(alphabet)), frozenset(trans),
               frozenset((p, q) for p in m1.initial for q in m2.initial),
               frozenset(s for s in states if s[0] in m1.final and s[1] in m2.final))


def nfa_intersection(m1, m2):
    return nfa_product(m1, m2)


def words_up_to(m, max_len):
    """ All accepted words of length at most `max_len`, shortest first. """
    found = []
    frontier = [((), m.initial)]
    for length in range(max_len + 1):
        nxt = []
        for w, cur in frontier:
            if m.accepts_states(cur):
                found.append(w)
            if length == max_len:
                continue
            for a in canonical_sorted(m.alphabet):
                s = m.step(cur, a)
                if s:
                    nxt.append((w + (a,), s))
        frontier = nxt
    return found


def star_automaton(symbols, name='s'):
    """ (symbols)* with a single state. """
    symbols = tuple(symbols)
    return Nfa((name,), symbols, frozenset((name, a, name) for a in symbols), {name}, {name})


def empty_automaton(symbols=()):
    return Nfa(('s',), tuple(symbols), frozenset(), {'s'}, frozenset())
