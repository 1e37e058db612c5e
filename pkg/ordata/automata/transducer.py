import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from ordata import DEFAULT_OUTPUT_BUDGET
from ordata.automata.tree_automaton import ta_run
from ordata.common.errors import OrdataError, UnknownSymbolError
from ordata.common.utils import canonical_sorted

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TreeTransducer(object):
    """ Letter-to-letter tree transducer: a tree automaton plus an output relation μ ⊆ Q × Σ × Γ. """

    base: object
    output_alphabet: tuple
    outputs: frozenset

    def __post_init__(self):
        object.__setattr__(self, 'output_alphabet', tuple(self.output_alphabet))
        object.__setattr__(self, 'outputs', frozenset(self.outputs))
        states = set(self.base.states)
        gamma = set(self.output_alphabet)
        if len(gamma) != len(self.output_alphabet):
            raise OrdataError('duplicate output symbols')
        for q, a, b in self.outputs:
            if q not in states:
                raise OrdataError('output relation references undeclared state {!r}'.format(q))
            if a not in self.base.symbol_set:
                raise UnknownSymbolError(a, 'transducer input alphabet')
            if b not in gamma:
                raise UnknownSymbolError(b, 'transducer output alphabet')

    @property
    def states(self):
        return self.base.states

    @property
    def input_alphabet(self):
        return self.base.alphabet

    @cached_property
    def mu(self):
        """ (q, a) -> outputs in canonical order """
        table = defaultdict(set)
        for q, a, b in self.outputs:
            table[(q, a)].add(b)
        return {k: tuple(canonical_sorted(v)) for k, v in table.items()}

    def outputs_for(self, q, a):
        return self.mu.get((q, a), ())

    def emitting_states(self, a):
        """ States that have at least one output on input symbol a. """
        return frozenset(q for q in self.base.states if (q, a) in self.mu)


def identity_transducer(a):
    """ μ = {(q, a, a)}: every accepted tree is output unchanged. """
    return TreeTransducer(a, a.alphabet, frozenset((q, lab, lab) for (q, lab), _ in a.horizontal))


def allowed_states(tr, t, chosen):
    """ Per-node states compatible with the outputs fixed so far in `chosen` (node -> output). """
    allowed = []
    for u in t.nodes():
        lab = t.labels[u]
        if u in chosen:
            allowed.append(frozenset(q for q in tr.base.states if chosen[u] in tr.mu.get((q, lab), ())))
        else:
            allowed.append(tr.emitting_states(lab))
    return allowed


def output_run(tr, t, chosen):
    """ An accepting run that emits the outputs in `chosen`, or None. """
    return ta_run(tr.base, t, allowed_states(tr, t, chosen))


class OutputEnumeration(object):
    """
    Lazy enumeration of the output trees of a transducer on one input tree.

    Iterating yields each distinct output (as a LabeledTree) once, in depth-first
    order over preorder nodes with the smallest output symbol first. After `budget`
    outputs the enumeration stops and `truncated` is set. A handle must not be shared
    between concurrent consumers.
    """

    def __init__(self, tr, t, budget=DEFAULT_OUTPUT_BUDGET):
        self.tr = tr
        self.t = t
        self.budget = budget
        self.truncated = False
        self.count = 0
        tr.base.check_labels(t)

    def __iter__(self):
        t, tr = self.t, self.tr
        if output_run(tr, t, {}) is None:
            return
        chosen = {}
        stack = [(0, iter(self._candidates(0)))]
        while stack:
            u, options = stack[-1]
            chosen.pop(u, None)
            for b in options:
                chosen[u] = b
                if output_run(tr, t, chosen) is not None:
                    break
                del chosen[u]
            else:
                stack.pop()
                continue

            if u + 1 == len(t):
                if self.count >= self.budget:
                    self.truncated = True
                    logger.debug('output enumeration truncated after {} outputs'.format(self.count))
                    return
                self.count += 1
                yield t.relabel(tuple(chosen[v] for v in t.nodes()))
            else:
                stack.append((u + 1, iter(self._candidates(u + 1))))

    def _candidates(self, u):
        lab = self.t.labels[u]
        return canonical_sorted({b for q in self.tr.base.states for b in self.tr.mu.get((q, lab), ())})


def transducer_apply(tr, t, budget=DEFAULT_OUTPUT_BUDGET):
    """ The output trees of `tr` on `t`, enumerated lazily through an OutputEnumeration handle. """
    return OutputEnumeration(tr, t, budget)
