import itertools
import logging
from dataclasses import dataclass, field

from ordata import MAX_MATERIALIZED_ALPHABET
from ordata.automata.nfa import Nfa, PredicateNfa
from ordata.automata.regex import compile_regex
from ordata.automata.transducer import identity_transducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, ta_accepts
from ordata.common.errors import CapExceeded, OrdataError, UnknownSymbolError
from ordata.common.utils import canonical_sorted, nonempty_subsets, ordered_set_partitions
from ordata.frontends.constraints import Inclusion, Key, check_constraints, satisfies_all
from ordata.odta.automaton import EMPTY, NONEMPTY, WeakODTA
from ordata.odta.weak_emptiness import empty_weak

logger = logging.getLogger(__name__)

# labels whose inclusion orderings dtd_sat enumerates
MAX_GUESS_LABELS = 6


@dataclass(frozen=True, eq=False)
class Dtd(object):
    """
    A DTD with regular content models.

    `productions` maps a label to the NFA over Σ of its admissible child words;
    labels without a production only occur as leaves.
    """

    alphabet: tuple
    root: str
    productions: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, 'alphabet', tuple(self.alphabet))
        sigma = set(self.alphabet)
        if self.root not in sigma:
            raise UnknownSymbolError(self.root, 'DTD alphabet')
        for a, m in self.productions.items():
            if a not in sigma:
                raise UnknownSymbolError(a, 'DTD alphabet')
            if not set(m.alphabet) <= sigma:
                raise OrdataError('content model of {} uses labels outside the DTD alphabet'.format(a))

    def production(self, a):
        if a in self.productions:
            return self.productions[a]
        return compile_regex('~', self.alphabet)

    @classmethod
    def from_rules(cls, rules, root=None, alphabet=None):
        """ Builds a DTD from `label -> regular expression` pairs; the first rule names the root by default. """
        rules = list(rules)
        if alphabet is None:
            names = [a for a, _ in rules]
            for _, expr in rules:
                names += compile_regex(expr).alphabet
            alphabet = tuple(dict.fromkeys(names))
        root = root or rules[0][0]
        return cls(tuple(alphabet), root, {a: compile_regex(expr, alphabet) for a, expr in rules})


def dtd_automaton(d):
    """ Conformance automaton of `d`: states are the labels, a node in state a is labeled a. """
    horizontal = tuple(((a, a), d.production(a)) for a in d.alphabet)
    return UnrankedTreeAutomaton(d.alphabet, d.alphabet, horizontal, {d.root})


def conforms(d, t):
    return ta_accepts(dtd_automaton(d), t.projection() if hasattr(t, 'projection') else t)


def _split(constraints):
    keys = frozenset(c.label for c in constraints if isinstance(c, Key))
    inclusions = [(c.left, c.right) for c in constraints if isinstance(c, Inclusion)]
    others = [c for c in constraints if not isinstance(c, (Key, Inclusion))]
    if others:
        raise OrdataError('DTD constraints are key(a) and incl(a,b), got {}'.format(others[0].render()))
    return keys, inclusions


def dtd_to_weak_odta(d, constraints):
    """
    Weak ODTA whose language is the trees conforming to `d` that satisfy the
    key and inclusion constraints.

    The value automaton accepts P* where P holds the nonempty S ⊆ Σ that contain
    no a without b for an inclusion V(a) ⊆ V(b); keys become the distinctness set.
    """
    check_constraints(constraints, d.alphabet)
    keys, inclusions = _split(constraints)

    def allowed(s):
        return bool(s) and s <= frozenset(d.alphabet) and \
            not any(a in s and b not in s for a, b in inclusions)

    if len(d.alphabet) > MAX_MATERIALIZED_ALPHABET:
        m = PredicateNfa(allowed, 'P*')
    else:
        symbols = [s for s in nonempty_subsets(d.alphabet) if allowed(s)]
        m = Nfa(('p',), symbols, frozenset(('p', s, 'p') for s in symbols), {'p'}, {'p'})
    return WeakODTA(identity_transducer(dtd_automaton(d)), m, keys)


def inclusion_classes(sigma, inclusions):
    """ Labels grouped by mutual inclusion, in canonical order. """
    both = {(a, b) for a, b in inclusions if (b, a) in inclusions}
    classes = []
    for a in canonical_sorted(sigma):
        for c in classes:
            if (a, c[0]) in both:
                c.append(a)
                break
        else:
            classes.append([a])
    return [frozenset(c) for c in classes]


def inclusion_orderings(sigma, inclusions):
    """
    Yields (used, (H_1, ..., H_k)): an upward closed set of used labels and an ordered
    partition of it into unions of mutual-inclusion classes such that V(a) ⊆ V(b)
    puts a no later than b.
    """
    classes = inclusion_classes(sigma, inclusions)
    if len(classes) > MAX_GUESS_LABELS:
        raise CapExceeded('inclusion classes', MAX_GUESS_LABELS)
    for k in range(1, len(classes) + 1):
        for chosen in itertools.combinations(classes, k):
            used = frozenset().union(*chosen)
            if any(a in used and b not in used for a, b in inclusions):
                continue
            for blocks in ordered_set_partitions(chosen):
                hs = tuple(frozenset().union(*b) for b in blocks)
                index = {a: i for i, h in enumerate(hs) for a in h}
                if all(index[a] <= index[b] for a, b in inclusions if a in used):
                    yield used, hs


def chain_automaton(used, hs):
    """ S_i = used ∖ (H_1 ∪ ... ∪ H_{i-1}); M reads S_j from q_i for every i <= j, all states initial and final. """
    sets = []
    rest = frozenset(used)
    for h in hs:
        sets.append(rest)
        rest = rest - h
    states = tuple(range(len(sets)))
    trans = frozenset((i, sets[j], j) for i in states for j in states if i <= j)
    return Nfa(states, tuple(dict.fromkeys(sets)), trans, frozenset(states), frozenset(states))


@dataclass
class SatVerdict(object):
    """ SAT(witness) | UNSAT | UNKNOWN, with the guess that produced a witness. """

    status: str
    witness: object = None
    guess: tuple = None
    report: dict = field(default_factory=dict)

    @property
    def is_sat(self):
        return self.status == 'sat'


def dtd_sat(d, constraints, caps=None, **kwargs):
    """
    Satisfiability of a DTD with key and inclusion constraints.

    Each inclusion ordering yields a weak ODTA with a small chain value automaton;
    the constraints are satisfiable iff one of them is nonempty. UNKNOWN when no
    witness was found but some guess ended within caps.
    """
    check_constraints(constraints, d.alphabet)
    keys, inclusions = _split(constraints)
    tr = identity_transducer(dtd_automaton(d))

    guesses, undecided = 0, 0
    for used, hs in inclusion_orderings(d.alphabet, inclusions):
        guesses += 1
        s = WeakODTA(tr, chain_automaton(used, hs), keys)
        verdict = empty_weak(s, caps, **kwargs)
        if verdict.kind == NONEMPTY:
            witness = verdict.witness
            assert conforms(d, witness) and satisfies_all(constraints, witness), 'witness breaks the DTD'
            logger.info('satisfiable after {} guesses, used labels {}'.format(guesses, canonical_sorted(used)))
            return SatVerdict('sat', witness, hs, {'guesses': guesses})
        if verdict.kind != EMPTY:
            undecided += 1
    status = 'unknown' if undecided else 'unsat'
    logger.info('{} after {} guesses ({} undecided)'.format(status, guesses, undecided))
    return SatVerdict(status, report={'guesses': guesses, 'undecided': undecided})
