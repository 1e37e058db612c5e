import logging
from collections import Counter

from ordata import DEFAULT_MEMBER_BUDGET, DEFAULT_SOLVER_BUDGET
from ordata.automata.transducer import output_run
from ordata.automata.tree_automaton import ta_accepts
from ordata.common.errors import BudgetExhausted, OrdataError
from ordata.common.utils import canonical_sorted
from ordata.core.profiles import profile
from ordata.core.trees import LabeledTree, OrderedDataTree, StringDataTree
from ordata.core.values import prefix_tree_representation, value_classes
from ordata.core.zones import zones
from ordata.odta.automaton import UNKNOWN, ExtendedWeakODTA, StringWeakODTA, WeakODTA, ZonalODTA
from ordata.presburger.formula import Assignment, cls, eq, evaluate, formula_of, sym

logger = logging.getLogger(__name__)


class ClassSearch(object):
    """
    Depth-first search for a transducer output accepted through the data values.

    Nodes are assigned outputs in ascending (value, node) order, smallest output
    first. Every partial choice must extend to an accepting run of the transducer,
    Γ₀ outputs may not repeat within a value, and each completed value class
    advances the value automaton through `advance`. `accept` decides complete
    outputs. Subclasses fill in both.
    """

    def __init__(self, transducer, inp, t, gamma0=frozenset(), budget=DEFAULT_MEMBER_BUDGET):
        self.tr = transducer
        self.inp = inp
        self.t = t
        self.gamma0 = frozenset(gamma0)
        self.budget = budget

        self.order = sorted(t.nodes(), key=lambda u: (t.values[u], u))
        self.steps = 0
        self.exhausted = False
        self.outputs = None

        self.candidates = []
        for u in t.nodes():
            lab = inp.labels[u]
            self.candidates.append(canonical_sorted({b for q in transducer.states
                                                     for b in transducer.mu.get((q, lab), ())}))

    def initial(self):
        raise NotImplementedError

    def advance(self, state, value, nodes, chosen):
        raise NotImplementedError

    def accept(self, state, chosen):
        raise NotImplementedError

    def output_tree(self, chosen):
        return type(self.t)(tuple(chosen[u] for u in self.t.nodes()), self.t.children, self.t.values)

    def run(self):
        """ True, False or UNKNOWN. """
        self.tr.base.check_labels(self.inp)
        if output_run(self.tr, self.inp, {}) is None:
            return False
        chosen = {}
        try:
            if self._search(0, self.initial(), chosen, set(), 0):
                return True
        except BudgetExhausted:
            self.exhausted = True
        if self.exhausted:
            logger.debug('membership search stopped after {} steps'.format(self.steps))
            return UNKNOWN
        return False

    def _search(self, i, state, chosen, used, class_start):
        if self.steps >= self.budget:
            self.exhausted = True
            return False
        self.steps += 1

        t, order = self.t, self.order
        if i == len(order):
            if self.accept(state, chosen):
                self.outputs = self.output_tree(chosen)
                return True
            return False

        u = order[i]
        value = t.values[u]
        closes = i + 1 == len(order) or t.values[order[i + 1]] != value
        for b in self.candidates[u]:
            if b in self.gamma0 and (b, value) in used:
                continue
            chosen[u] = b
            if output_run(self.tr, self.inp, chosen) is None:
                del chosen[u]
                continue

            nxt = state
            if closes:
                nxt = self.advance(state, value, order[class_start:i + 1], chosen)
                if nxt is None:
                    del chosen[u]
                    continue

            fresh = b in self.gamma0
            if fresh:
                used.add((b, value))
            found = self._search(i + 1, nxt, chosen, used, i + 1 if closes else class_start)
            if fresh:
                used.discard((b, value))
            if found:
                return True
            del chosen[u]
            if self.exhausted:
                return False
        return False


class ValueWordSearch(ClassSearch):
    """ The value automaton reads one symbol per value: the set of outputs carrying it. """

    def __init__(self, transducer, inp, t, m, gamma0=frozenset(), budget=DEFAULT_MEMBER_BUDGET, constraint=None):
        super().__init__(transducer, inp, t, gamma0, budget)
        self.m = m
        self.constraint = constraint

    def initial(self):
        return self.m.initial

    def advance(self, state, value, nodes, chosen):
        symbol = frozenset(chosen[v] for v in nodes)
        if not self.m.knows(symbol):
            return None
        nxt = self.m.step(state, symbol)
        return nxt or None

    def accept(self, state, chosen):
        if not self.m.accepts_states(state):
            return False
        if self.constraint is None:
            return True
        return constraint_holds(self.constraint, output_counts(self.output_tree(chosen)))


class ZonalSearch(ClassSearch):
    """ The zonal automaton reads, per value, the set of label sets of the zones carrying it. """

    def __init__(self, transducer, inp, t, m, gamma0=frozenset(), budget=DEFAULT_MEMBER_BUDGET):
        super().__init__(transducer, inp, t, gamma0, budget)
        self.m = m
        self.by_value = {}
        for z in zones(t).zones:
            self.by_value.setdefault(z.value, []).append(z)

    def initial(self):
        return self.m.initial

    def advance(self, state, value, nodes, chosen):
        pattern = frozenset(frozenset(chosen[u] for u in z.nodes) for z in self.by_value[value])
        if not self.m.knows(pattern):
            return None
        nxt = self.m.step(state, pattern)
        return nxt or None

    def accept(self, state, chosen):
        return self.m.accepts_states(state)


class PrefixTreeSearch(ClassSearch):
    """ String data: the value tree automaton runs on the prefix tree of the output's values. """

    def __init__(self, transducer, inp, t, a, gamma0=frozenset(), budget=DEFAULT_MEMBER_BUDGET):
        super().__init__(transducer, inp, t, gamma0, budget)
        self.a = a

    def initial(self):
        return ()

    def advance(self, state, value, nodes, chosen):
        symbol = frozenset(chosen[v] for v in nodes)
        if symbol not in self.a.symbol_set:
            return None
        return state + ((value, symbol),)

    def accept(self, state, chosen):
        return ta_accepts(self.a, prefix_tree_representation(self.output_tree(chosen)))


def output_counts(out):
    """ x_α per output label and x_S = |[S]| per class of the output tree. """
    counts = Assignment()
    for b, n in Counter(out.labels).items():
        counts[sym(b)] = n
    for s, vs in value_classes(out).items():
        counts[cls(s)] = len(vs)
    return counts


def constraint_holds(constraint, counts, budget=DEFAULT_SOLVER_BUDGET):
    """ ξ(counts); quantified variables are decided by the solver. """
    f = formula_of(constraint)
    if not f.quantified:
        return evaluate(f, counts)
    from ordata.presburger.formula import combine
    from ordata.presburger.solver import SAT, Status, solve

    pins = [eq({k: 1}, counts[k]) for k in f.keys - f.quantified]
    result = solve(combine(f, *pins), budget=budget)
    if result.status is Status.UNKNOWN:
        raise BudgetExhausted('constraint undecided within budget', result.stats)
    return result.status is SAT


def _input_tree(s, t):
    if not isinstance(t, OrderedDataTree):
        raise OrdataError('membership needs a data tree')
    if getattr(s, 'profiled', False):
        return profile(t)
    return LabeledTree(t.labels, t.children)


def weak_search(s, t, budget=DEFAULT_MEMBER_BUDGET):
    """ The search object deciding membership of `t`; after `run()` its `outputs` hold an accepted output. """
    if isinstance(s, ExtendedWeakODTA):
        base = s.base
        return ValueWordSearch(base.transducer, _input_tree(base, t), t, base.value_automaton, base.gamma0,
                               budget, constraint=s.constraint)
    if isinstance(s, ZonalODTA):
        return ZonalSearch(s.transducer, _input_tree(s, t), t, s.zonal_automaton, s.gamma0, budget)
    if isinstance(s, StringWeakODTA):
        if not isinstance(t, StringDataTree):
            raise OrdataError('string ODTA membership needs string data')
        return PrefixTreeSearch(s.transducer, LabeledTree(t.labels, t.children), t, s.value_tree_automaton,
                                s.gamma0, budget)
    assert isinstance(s, WeakODTA), 'unsupported automaton {}'.format(type(s).__name__)
    return ValueWordSearch(s.transducer, _input_tree(s, t), t, s.value_automaton, s.gamma0, budget)


def member_weak(s, t, budget=DEFAULT_MEMBER_BUDGET):
    """
    Membership of the data tree `t` in a weak ODTA (or an extended one).

    Returns True, False or UNKNOWN when the output search exceeds `budget` steps.
    """
    return weak_search(s, t, budget).run()


def member_odta(s, t, budget=DEFAULT_MEMBER_BUDGET):
    """ Membership in an ODTA: the transducer runs on the profile tree of `t`. """
    assert s.profiled, 'member_odta needs an ODTA'
    return weak_search(s, t, budget).run()


def member_extended(s, t, budget=DEFAULT_MEMBER_BUDGET):
    assert isinstance(s, ExtendedWeakODTA)
    return weak_search(s, t, budget).run()


def member_zonal(s, t, budget=DEFAULT_MEMBER_BUDGET):
    assert isinstance(s, ZonalODTA)
    return weak_search(s, t, budget).run()


def member_string_weak(s, t, budget=DEFAULT_MEMBER_BUDGET):
    assert isinstance(s, StringWeakODTA)
    return weak_search(s, t, budget).run()


def member(s, t, budget=DEFAULT_MEMBER_BUDGET):
    """ Membership for every automaton kind of the toolkit. """
    return weak_search(s, t, budget).run()
