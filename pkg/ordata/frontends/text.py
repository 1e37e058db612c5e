"""
Texts (data words whose values are exactly 1..n) and text automata.

Words are handled as trees where every node has at most one child; `word_tree` and
`tree_word` convert between both views.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from ordata import DEFAULT_OUTPUT_BUDGET
from ordata.automata.nfa import Nfa, nfa_member
from ordata.automata.transducer import TreeTransducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton
from ordata.common.errors import BudgetExhausted, NotATextError, OrdataError, UnknownSymbolError
from ordata.core.trees import OrderedDataTree
from ordata.odta.automaton import WeakODTA

logger = logging.getLogger(__name__)

MARKS = (-1, 1, '*')


@dataclass(frozen=True, eq=False)
class WordTransducer(object):
    """ Letter-to-letter word transducer with transitions (p, (a, mark), α, p′). """

    states: tuple
    input_alphabet: tuple
    output_alphabet: tuple
    transitions: frozenset
    initial: frozenset
    final: frozenset

    def __post_init__(self):
        for name in ('states', 'input_alphabet', 'output_alphabet'):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        for name in ('transitions', 'initial', 'final'):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        states = set(self.states)
        for p, sym, alpha, q in self.transitions:
            if p not in states or q not in states:
                raise OrdataError('transition from {!r} to {!r} references undeclared state'.format(p, q))
            if sym not in self.input_alphabet:
                raise UnknownSymbolError(sym, 'word transducer input alphabet')
            if sym[1] not in MARKS:
                raise OrdataError('mark {!r} is not one of -1, 1, *'.format(sym[1]))
            if alpha not in self.output_alphabet:
                raise UnknownSymbolError(alpha, 'word transducer output alphabet')
        if not self.initial <= states or not self.final <= states:
            raise OrdataError('initial and final states must be declared')

    @cached_property
    def outgoing(self):
        table = defaultdict(list)
        for p, sym, alpha, q in sorted(self.transitions, key=repr):
            table[(p, sym)].append((alpha, q))
        return dict(table)

    @property
    def sigma(self):
        return tuple(dict.fromkeys(a for a, _ in self.input_alphabet))


@dataclass(frozen=True, eq=False)
class TextAutomaton(object):
    """ (T₁, T₂): T₁ reads the marked string projection, T₂ reads its outputs in value order. """

    t1: WordTransducer
    t2: Nfa

    def __post_init__(self):
        if not set(self.t2.alphabet) <= set(self.t1.output_alphabet):
            raise OrdataError('T₂ reads symbols T₁ never outputs')


def word_tree(word):
    """ [(a, d), ...] -> the path tree with the first position at the root. """
    if not word:
        raise OrdataError('words are nonempty')
    n = len(word)
    children = tuple((i + 1,) if i + 1 < n else () for i in range(n))
    return OrderedDataTree(tuple(a for a, _ in word), children, tuple(d for _, d in word))


def tree_word(t):
    word, u = [], 0
    while True:
        word.append((t.labels[u], t.values[u]))
        kids = t.children[u]
        if not kids:
            return word
        if len(kids) > 1:
            raise OrdataError('node {} has {} children, not a word'.format(u, len(kids)))
        u = kids[0]


def check_text(word):
    if not word:
        raise NotATextError('the word is empty')
    values = [d for _, d in word]
    if len(set(values)) != len(values):
        raise NotATextError('values are not pairwise distinct')
    if set(values) != set(range(1, len(values) + 1)):
        raise NotATextError('values are not exactly 1..{}'.format(len(values)))


def msp(word):
    """
    Marked string projection: position i gets -1 if the next value is one below its
    own, 1 if it is one above, and * otherwise (always * at the last position).
    """
    check_text(word)
    out = []
    for i, (a, d) in enumerate(word):
        mark = '*'
        if i + 1 < len(word):
            nxt = word[i + 1][1]
            if nxt + 1 == d:
                mark = -1
            elif d + 1 == nxt:
                mark = 1
        out.append((a, mark))
    return tuple(out)


def transducer_outputs(t1, marked, budget=DEFAULT_OUTPUT_BUDGET):
    """ Output words of every accepting run of T₁ on `marked`. """
    found = []
    stack = [(0, p, ()) for p in sorted(t1.initial, key=repr)]
    steps = 0
    while stack:
        i, p, out = stack.pop()
        steps += 1
        if steps > budget:
            raise BudgetExhausted('word transducer runs exceed the budget', {'steps': steps})
        if i == len(marked):
            if p in t1.final:
                found.append(out)
            continue
        for alpha, q in t1.outgoing.get((p, marked[i]), ()):
            stack.append((i + 1, q, out + (alpha,)))
    return found


def simulate_text_automaton(ta, word, budget=DEFAULT_OUTPUT_BUDGET):
    """ Direct acceptance of a text by (T₁, T₂). """
    marked = msp(word)
    by_value = sorted(range(len(word)), key=lambda i: word[i][1])
    for out in transducer_outputs(ta.t1, marked, budget):
        if nfa_member(ta.t2, tuple(out[i] for i in by_value)):
            return True
    return False


def text_automaton_to_weak_odta(ta):
    """
    Weak ODTA simulating a text automaton on words.

    A node's state (p, b, p′) records the T₁ step from p to p′ on the guessed mark b;
    leaves carry the mark * and end in a final state. The value automaton is T₂ over
    singleton symbols and every output label is in Γ₀, so accepted words carry
    pairwise distinct values and T₂ reads the outputs in value order. The guessed
    marks are not checked against the values.
    """
    t1, t2 = ta.t1, ta.t2
    steps = sorted({(p, sym[1], q) for p, sym, _, q in t1.transitions}, key=repr)
    by_source = defaultdict(list)
    for st in steps:
        by_source[st[0]].append(st)

    horizontal, outputs = [], set()
    cache = {}
    for p, mark, q in steps:
        leaf = q in t1.final and mark == '*'
        key = (q, leaf)
        if key not in cache:
            nexts = by_source.get(q, [])
            cache[key] = Nfa((0, 1), tuple(steps), frozenset((0, st, 1) for st in nexts), {0},
                             {0, 1} if leaf else {1})
        labels = set()
        for p2, (a, b), alpha, q2 in t1.transitions:
            if (p2, b, q2) == (p, mark, q):
                outputs.add(((p, mark, q), a, alpha))
                labels.add(a)
        for a in t1.sigma:
            if a in labels:
                horizontal.append((((p, mark, q), a), cache[key]))

    base = UnrankedTreeAutomaton(tuple(steps), t1.sigma, tuple(horizontal),
                                 frozenset(st for st in steps if st[0] in t1.initial))
    tr = TreeTransducer(base, t1.output_alphabet, frozenset(outputs))

    singletons = tuple(frozenset([alpha]) for alpha in t2.alphabet)
    m = Nfa(t2.states, singletons, frozenset((p, frozenset([alpha]), q) for p, alpha, q in t2.transitions),
            t2.initial, t2.final)
    return WeakODTA(tr, m, frozenset(t1.output_alphabet))
