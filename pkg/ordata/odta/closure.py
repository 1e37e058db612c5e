"""
Union and intersection of (weak) ODTA by the standard cross product constructions.

Output labels of the results are strings: 'L:b' / 'R:b' for the union and '<b1|b2>'
for the intersection, so the results stay expressible in the bundle file format.
"""
import logging
from collections import deque

from ordata import MAX_ZONAL_SYMBOLS
from ordata.automata.nfa import Nfa, PredicateNfa, nfa_map_symbols, nfa_union
from ordata.automata.transducer import TreeTransducer
from ordata.automata.tree_automaton import ta_product_intersection, ta_product_union
from ordata.common.errors import AlphabetMismatchError, CapExceeded, OrdataError
from ordata.common.utils import canonical_sorted, render_symbol
from ordata.odta.automaton import ODTA, WeakODTA

logger = logging.getLogger(__name__)

# pair labels one product symbol may range over
MAX_PAIR_CANDIDATES = 20


def _check_operands(s1, s2):
    for s in (s1, s2):
        if type(s) not in (WeakODTA, ODTA):
            raise OrdataError('closure constructions need WeakODTA or ODTA operands, got {}'.format(type(s).__name__))
        if isinstance(s.value_automaton, PredicateNfa):
            raise CapExceeded('alphabet', 'materialization', 'closure needs explicit value automata')
    if s1.profiled != s2.profiled:
        raise AlphabetMismatchError('cannot combine a weak ODTA with an ODTA')
    if set(s1.sigma) != set(s2.sigma):
        raise AlphabetMismatchError('input alphabets differ: {} vs {}'.format(
            canonical_sorted(s1.sigma), canonical_sorted(s2.sigma)))


def _build(profiled, transducer, m, gamma0):
    if profiled:
        return ODTA(transducer, m, gamma0)
    return WeakODTA(transducer, m, gamma0)


def tag(side, b):
    return '{}:{}'.format(side, render_symbol(b))


def pair_label(b1, b2):
    return '<{}|{}>'.format(render_symbol(b1), render_symbol(b2))


def odta_union(s1, s2):
    """
    An automaton accepting L(s1) ∪ L(s2): it guesses which operand to simulate and
    outputs that operand's labels tagged with its side.
    """
    _check_operands(s1, s2)
    t1, t2 = s1.transducer, s2.transducer
    base = ta_product_union(t1.base, t2.base)

    left = {b: tag('L', b) for b in t1.output_alphabet}
    right = {b: tag('R', b) for b in t2.output_alphabet}
    outputs = frozenset(((1, q), a, left[b]) for q, a, b in t1.outputs) | \
        frozenset(((2, q), a, right[b]) for q, a, b in t2.outputs)
    gamma = tuple(left.values()) + tuple(right.values())

    m1 = nfa_map_symbols(s1.value_automaton, lambda s: frozenset(left[b] for b in s))
    m2 = nfa_map_symbols(s2.value_automaton, lambda s: frozenset(right[b] for b in s))
    m = nfa_union(m1, m2)

    gamma0 = frozenset(left[b] for b in s1.gamma0) | frozenset(right[b] for b in s2.gamma0)
    return _build(s1.profiled, TreeTransducer(base, gamma, outputs), m, gamma0)


def _pair_symbols(c1, c2, candidates, gamma0_1, gamma0_2):
    """ Sets S of pair labels with π1(S) = c1 and π2(S) = c2, without two pairs sharing a Γ₀ component. """
    pool = [(b1, b2) for b1, b2 in candidates if b1 in c1 and b2 in c2]
    if len(pool) > MAX_PAIR_CANDIDATES:
        raise CapExceeded('product alphabet', MAX_PAIR_CANDIDATES)
    out = []
    for mask in range(1, 2 ** len(pool)):
        chosen = [pool[i] for i in range(len(pool)) if mask >> i & 1]
        if {b1 for b1, _ in chosen} != c1 or {b2 for _, b2 in chosen} != c2:
            continue
        firsts = [b1 for b1, _ in chosen if b1 in gamma0_1]
        seconds = [b2 for _, b2 in chosen if b2 in gamma0_2]
        if len(firsts) != len(set(firsts)) or len(seconds) != len(set(seconds)):
            continue
        out.append(frozenset(pair_label(b1, b2) for b1, b2 in chosen))
    return out


def odta_intersect(s1, s2, max_symbols=MAX_ZONAL_SYMBOLS):
    """
    An automaton accepting L(s1) ∩ L(s2).

    The transducer runs both operands in lockstep and outputs pairs of their
    labels. A value automaton symbol S over pairs is read by the product of both
    value automata as (π1(S), π2(S)); a pair label is in Γ₀ when either component
    is, and no symbol holds two pairs sharing a Γ₀ component, so both projected
    outputs keep their distinctness conditions.
    """
    _check_operands(s1, s2)
    t1, t2 = s1.transducer, s2.transducer
    base = ta_product_intersection(t1.base, t2.base)

    outputs = set()
    pairs = set()
    for ((q1, q2), a), _ in base.horizontal:
        for b1 in t1.outputs_for(q1, a):
            for b2 in t2.outputs_for(q2, a):
                outputs.add(((q1, q2), a, pair_label(b1, b2)))
                pairs.add((b1, b2))
    pairs = canonical_sorted(pairs)
    gamma = tuple(pair_label(b1, b2) for b1, b2 in pairs)

    m1, m2 = s1.value_automaton, s2.value_automaton
    start = [(p, q) for p in canonical_sorted(m1.initial) for q in canonical_sorted(m2.initial)]
    states, trans, alphabet = set(start), set(), []
    symbol_cache = {}
    queue = deque(start)
    while queue:
        p, q = queue.popleft()
        for c1, p2 in m1.outgoing.get(p, []):
            for c2, q2 in m2.outgoing.get(q, []):
                key = (c1, c2)
                if key not in symbol_cache:
                    symbol_cache[key] = _pair_symbols(c1, c2, pairs, s1.gamma0, s2.gamma0)
                    alphabet.extend(symbol_cache[key])
                    if len(alphabet) > max_symbols:
                        raise CapExceeded('product alphabet', max_symbols)
                for sym in symbol_cache[key]:
                    trans.add(((p, q), sym, (p2, q2)))
                if symbol_cache[key] and (p2, q2) not in states:
                    states.add((p2, q2))
                    queue.append((p2, q2))

    states = canonical_sorted(states)
    m = Nfa(tuple(states), tuple(dict.fromkeys(alphabet)), frozenset(trans), frozenset(start),
            frozenset(s for s in states if s[0] in m1.final and s[1] in m2.final))
    logger.debug('intersection: {} output labels, value automaton with {} states and {} symbols'.format(
        len(gamma), len(states), len(m.alphabet)))

    gamma0 = frozenset(pair_label(b1, b2) for b1, b2 in pairs if b1 in s1.gamma0 or b2 in s2.gamma0)
    return _build(s1.profiled, TreeTransducer(base, gamma, frozenset(outputs)), m, gamma0)
