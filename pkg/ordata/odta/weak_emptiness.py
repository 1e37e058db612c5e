import logging

from ordata import DEFAULT_MEMBER_BUDGET
from ordata.automata.nfa import Nfa
from ordata.automata.profile_automaton import profile_consistency_automaton
from ordata.automata.tree_automaton import (UnrankedTreeAutomaton, check_run, ta_empty,
                                            ta_product_intersection)
from ordata.common.errors import CapExceeded, DecodeFailed, OrdataError, VerificationError, WitnessUnverified
from ordata.common.utils import canonical_sorted
from ordata.core.trees import OrderedDataTree, StringDataTree
from ordata.core.values import ROOT, prefix_tree_representation, string_representation
from ordata.odta.automaton import UNKNOWN, EmptinessVerdict, ExtendedWeakODTA, StringWeakODTA, WeakODTA
from ordata.odta.base import BaseProcedure
from ordata.odta.membership import constraint_holds, member, output_counts
from ordata.presburger.formula import (aux, cls, combine, conj, disj, eq, ext, free_keys, ge, minus, sym,
                                       total)
from ordata.presburger.parikh import decode_tree, decode_word, parikh_formula_nfa, parikh_formula_ta
from ordata.presburger.solver import SAT, UNSAT, solve

logger = logging.getLogger(__name__)


def extended_automaton(tr, profiled=False):
    """
    Tree automaton over Σ × Q × Γ for the extended trees of the transducer `tr`.

    A node labeled (a, q, α) reads a, takes state q and outputs α ∈ μ(q, a); the
    run is therefore written in the labels. With `profiled`, a is a (label, profile)
    pair and the result is intersected with the profile consistency automaton, so
    only profile components some data tree realizes remain (states become
    (q, profile) pairs).
    """
    base = tr.base
    labels, horizontal = [], []
    for q, a, b in canonical_sorted(tr.outputs):
        h = base.delta.get((q, a))
        if h is None:
            continue
        lab = (a, q, b)
        labels.append(lab)
        horizontal.append(((q, lab), h))
    a = UnrankedTreeAutomaton(base.states, tuple(labels), tuple(horizontal), base.final)
    if not profiled:
        return a
    return ta_product_intersection(a, profile_consistency_automaton(labels, profile_of=lambda lab: lab[0][1]))


def ext_key(lab):
    return ext(*lab)


def label_constraints(gamma, gamma0, symbols):
    """
    Links output label counts x_α to the class counts x_S of the value word:
    x_α ≥ Σ_{S∋α} x_S, with equality for α ∈ Γ₀, and α-nodes need some class to
    draw their values from.
    """
    parts = []
    for alpha in canonical_sorted(gamma):
        containing = [cls(s) for s in symbols if alpha in s]
        spread = minus({sym(alpha): 1}, total(containing))
        parts.append(eq(spread, 0) if alpha in gamma0 else ge(spread, 0))
        if containing:
            parts.append(disj(eq({sym(alpha): 1}, 0), ge(total(containing), 1)))
        else:
            parts.append(eq({sym(alpha): 1}, 0))
    return conj(*parts)


def output_count_constraints(a, gamma):
    """ x_α = Σ_{a,q} x_(a,q,α) over the labels of the extended automaton `a`. """
    parts = []
    for alpha in canonical_sorted(gamma):
        keys = [ext_key(lab) for lab in a.alphabet if lab[2] == alpha]
        parts.append(eq(minus({sym(alpha): 1}, total(keys)), 0))
    return conj(*parts)


def assign_values(outputs, positions):
    """
    Data values for the nodes of an output tree realizing a value word.

    Parameters
    ----------
    outputs: sequence
        output label per node, in preorder
    positions: sequence
        (value, S) per word position, ascending in value

    Returns
    -------
        list of values such that value d is carried by exactly the labels of its S.
        The i-th α-node takes the i-th value whose S contains α; surplus α-nodes take
        the smallest one.
    """
    slots = {}
    for value, s in positions:
        for alpha in s:
            slots.setdefault(alpha, []).append(value)
    seen = {}
    values = []
    for alpha in outputs:
        i = seen.get(alpha, 0)
        seen[alpha] = i + 1
        pool = slots.get(alpha)
        if not pool:
            raise DecodeFailed('no value class holds output label {!r}'.format(alpha))
        values.append(pool[i] if i < len(pool) else pool[0])
    return values


def _gamma0_ok(out, gamma0):
    seen = set()
    for lab, v in zip(out.labels, out.values):
        if lab in gamma0:
            if (lab, v) in seen:
                return False
            seen.add((lab, v))
    return True


class WeakEmptiness(BaseProcedure):

    def __init__(self, automaton, caps=None, member_budget=DEFAULT_MEMBER_BUDGET, **kwargs):
        """
        Decides emptiness of a weak ODTA, optionally extended with a Presburger constraint.

        The procedure builds one existential formula: the Parikh formula of the
        extended-tree automaton, the Parikh formula of the value automaton over class
        counts x_S, the label constraints linking both and the extension constraint.
        A model is decoded into an extended tree, a value word and a data value
        assignment, checked and returned as witness.

        Parameters
        ----------
        automaton: WeakODTA or ExtendedWeakODTA
            automaton to decide

        caps: EmptinessCaps
            only solver_budget is used

        member_budget: int
            step budget of the membership re-check of the witness

        """
        super().__init__(automaton, kwargs.pop('alg_name', 'empty-weak'), caps=caps, **kwargs)

        if isinstance(automaton, ExtendedWeakODTA):
            self.s, self.constraint = automaton.base, automaton.constraint
        else:
            self.s, self.constraint = automaton, None

        assert isinstance(self.s, WeakODTA), 'weak emptiness needs a weak ODTA'
        if self.s.profiled:
            raise OrdataError('weak emptiness does not apply to ODTA, use empty_odta')
        self.member_budget = member_budget

    def formula(self, a):
        s = self.s
        m = s.value_automaton
        symbols = canonical_sorted(m.alphabet)
        parts = [parikh_formula_ta(a, label_key=ext_key, prefix='t'),
                 parikh_formula_nfa(m, key=cls, prefix='m'),
                 output_count_constraints(a, s.gamma),
                 label_constraints(s.gamma, s.gamma0, symbols)]
        if self.constraint is not None:
            known = set(symbols)
            parts.append(self.constraint)
            # classes outside the value automaton's alphabet never occur
            parts.extend(eq({k: 1}, 0) for k in free_keys(self.constraint) if k.kind == 'cls' and k.name not in known)
        return combine(*parts)

    def run(self):
        self._start()
        s = self.s
        a = extended_automaton(s.transducer)
        self.stats['extended_labels'] = len(a.alphabet)

        if ta_empty(a):
            self.logger.debug('transducer has no accepting run')
            return self._finalize(EmptinessVerdict.empty({'reason': 'no transducer run'}))

        try:
            phi = self.formula(a)
        except CapExceeded as e:
            return self._finalize(EmptinessVerdict.within_caps({'reason': str(e)}))

        self.stats['variables'] = len(phi.keys)
        result = solve(phi, budget=self.caps.solver_budget, seed=self.caps.seed)
        self.stats['solver_nodes'] = result.stats.get('nodes', 0)

        if result.status is UNSAT:
            return self._finalize(EmptinessVerdict.empty({'solver': result.stats}))
        if result.status is not SAT:
            return self._finalize(EmptinessVerdict.within_caps({'reason': 'solver budget exhausted',
                                                                'solver': result.stats}))
        try:
            witness, certificate = self.decode(a, result.assignment)
        except DecodeFailed as e:
            self.logger.warning('decoding a model failed: {}'.format(e))
            return self._finalize(EmptinessVerdict.within_caps({'reason': str(e)}))
        except WitnessUnverified as e:
            self.logger.warning(str(e))
            return self._finalize(EmptinessVerdict.within_caps({'reason': str(e), 'solver': result.stats}))
        return self._finalize(EmptinessVerdict.nonempty(witness, certificate, {'solver': result.stats}))

    def decode(self, a, v):
        s = self.s
        budget = self.caps.solver_budget
        ext_tree, run = decode_tree(a, v, label_key=ext_key, prefix='t', budget=budget, with_run=True)
        word = decode_word(s.value_automaton, v, key=cls, prefix='m', budget=budget)

        outputs = [lab[2] for lab in ext_tree.labels]
        values = assign_values(outputs, list(enumerate(word, 1)))
        witness = OrderedDataTree(tuple(lab[0] for lab in ext_tree.labels), ext_tree.children, tuple(values))
        out = OrderedDataTree(tuple(outputs), ext_tree.children, tuple(values))

        self.verify(witness, out, tuple(lab[1] for lab in ext_tree.labels), word)
        return witness, {'output': out, 'value_word': word, 'run': run}

    def verify(self, witness, out, states, word):
        s = self.s
        tr = s.transducer
        if not check_run(tr.base, witness.projection(), states):
            raise VerificationError('decoded run is not an accepting transducer run')
        if any(b not in tr.outputs_for(q, a) for q, a, b in zip(states, witness.labels, out.labels)):
            raise VerificationError('decoded outputs are not produced by the run')
        if string_representation(out) != tuple(word):
            raise VerificationError('decoded values do not realize the value word')
        if not _gamma0_ok(out, s.gamma0):
            raise VerificationError('decoded values repeat on a distinct label')
        if self.constraint is not None and not constraint_holds(self.constraint, output_counts(out)):
            raise VerificationError('decoded output violates the extension constraint')

        verdict = member(self.automaton, witness, self.member_budget)
        if verdict is UNKNOWN:
            raise WitnessUnverified('membership re-check of the witness ran out of budget')
        if not verdict:
            raise VerificationError('witness is rejected by membership')


def rooted_value_automaton(a):
    """
    Restricts a value tree automaton to trees with ROOT exactly at the root.

    States become (q, 'root') and (q, 'inner'); only root states are final.
    """
    cache = {}

    def inner(h):
        if id(h) not in cache:
            cache[id(h)] = Nfa(h.states, tuple((r, 'inner') for r in h.alphabet),
                               frozenset((p, (r, 'inner'), p2) for p, r, p2 in h.transitions), h.initial, h.final)
        return cache[id(h)]

    horizontal = []
    for (q, lab), h in a.horizontal:
        if lab == ROOT:
            if q in a.final:
                horizontal.append((((q, 'root'), lab), inner(h)))
        else:
            horizontal.append((((q, 'inner'), lab), inner(h)))
    states = tuple((q, 'root') for q in a.states) + tuple((q, 'inner') for q in a.states)
    return UnrankedTreeAutomaton(states, a.alphabet, tuple(horizontal), frozenset((q, 'root') for q in a.final))


def root_key(lab):
    return aux('string', 'root') if lab == ROOT else cls(lab)


def bit_strings(tree):
    """
    Bit-strings for the nodes of a value tree whose prefix tree is the tree itself:
    child i of the k children of s gets s·0^(k−1−i)·1. The root gets ''.
    """
    strings = [''] * len(tree)
    for u in tree.nodes():
        kids = tree.children[u]
        k = len(kids)
        for i, c in enumerate(kids):
            strings[c] = strings[u] + '0' * (k - 1 - i) + '1'
    return strings


class StringWeakEmptiness(WeakEmptiness):
    """ Emptiness of weak ODTA over string data, with a tree-shaped value representation. """

    def __init__(self, automaton, caps=None, member_budget=DEFAULT_MEMBER_BUDGET, **kwargs):
        assert isinstance(automaton, StringWeakODTA), 'needs a StringWeakODTA'
        BaseProcedure.__init__(self, automaton, kwargs.pop('alg_name', 'empty-string-weak'), caps=caps, **kwargs)
        self.s = automaton
        self.constraint = None
        self.member_budget = member_budget
        self.value_tree = rooted_value_automaton(automaton.value_tree_automaton)

    def formula(self, a):
        s = self.s
        symbols = [lab for lab in s.value_tree_automaton.alphabet if lab != ROOT]
        return combine(parikh_formula_ta(a, label_key=ext_key, prefix='t'),
                       parikh_formula_ta(self.value_tree, label_key=root_key, prefix='v'),
                       output_count_constraints(a, s.gamma),
                       label_constraints(s.gamma, s.gamma0, canonical_sorted(symbols)))

    def decode(self, a, v):
        s = self.s
        budget = self.caps.solver_budget
        ext_tree, run = decode_tree(a, v, label_key=ext_key, prefix='t', budget=budget, with_run=True)
        value_tree = decode_tree(self.value_tree, v, label_key=root_key, prefix='v', budget=budget)

        strings = bit_strings(value_tree)
        positions = sorted((strings[u], value_tree.labels[u]) for u in value_tree.nodes() if u != 0)
        outputs = [lab[2] for lab in ext_tree.labels]
        values = assign_values(outputs, positions)
        witness = StringDataTree(tuple(lab[0] for lab in ext_tree.labels), ext_tree.children, tuple(values))
        out = StringDataTree(tuple(outputs), ext_tree.children, tuple(values))

        self.verify_string(witness, out, tuple(lab[1] for lab in ext_tree.labels), value_tree)
        return witness, {'output': out, 'value_tree': value_tree, 'run': run}

    def verify_string(self, witness, out, states, value_tree):
        tr = self.s.transducer
        if not check_run(tr.base, witness.projection(), states):
            raise VerificationError('decoded run is not an accepting transducer run')
        if prefix_tree_representation(out) != value_tree:
            raise VerificationError('decoded strings do not realize the value tree')
        if not _gamma0_ok(out, self.s.gamma0):
            raise VerificationError('decoded values repeat on a distinct label')
        verdict = member(self.s, witness, self.member_budget)
        if verdict is UNKNOWN:
            raise WitnessUnverified('membership re-check of the witness ran out of budget')
        if not verdict:
            raise VerificationError('witness is rejected by membership')


def empty_weak(s, caps=None, **kwargs):
    """ Emptiness of a weak ODTA: NONEMPTY with a verified witness, EMPTY, or EMPTY_WITHIN_CAPS. """
    return WeakEmptiness(s, caps, **kwargs).run()


def empty_weak_ext(s, caps=None, **kwargs):
    """ Emptiness of a weak ODTA extended with a Presburger constraint. """
    assert isinstance(s, ExtendedWeakODTA), 'empty_weak_ext needs an ExtendedWeakODTA'
    return WeakEmptiness(s, caps, alg_name='empty-weak-ext', **kwargs).run()


def empty_string_weak(s, caps=None, **kwargs):
    return StringWeakEmptiness(s, caps, **kwargs).run()
