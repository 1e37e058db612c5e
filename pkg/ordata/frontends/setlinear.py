import logging

from ordata import MAX_MATERIALIZED_ALPHABET
from ordata.automata.nfa import Nfa
from ordata.automata.transducer import identity_transducer
from ordata.common.errors import CapExceeded, OrdataError
from ordata.common.utils import nonempty_subsets
from ordata.frontends.constraints import LinearConstraint, SetConstraint, check_constraints, sterm_family
from ordata.odta.automaton import ExtendedWeakODTA, WeakODTA
from ordata.presburger.formula import conj

logger = logging.getLogger(__name__)


def set_constraint_automaton(sigma, set_constraints):
    """
    Value automaton for set constraints: symbols of 𝕊(τ) never occur for τ = ∅, and
    some symbol of 𝕊(τ) occurs for τ ≠ ∅. States record the satisfied τ ≠ ∅.
    """
    forbidden = frozenset()
    required = []
    for c in set_constraints:
        family = sterm_family(c.term, sigma)
        if c.nonempty:
            required.append(family)
        else:
            forbidden |= family

    symbols = [s for s in nonempty_subsets(sigma) if s not in forbidden]
    everything = frozenset(range(len(required)))
    start = frozenset()
    states, trans, frontier = {start}, set(), [start]
    while frontier:
        x = frontier.pop()
        for s in symbols:
            y = x | frozenset(i for i, family in enumerate(required) if s in family)
            trans.add((x, s, y))
            if y not in states:
                states.add(y)
                frontier.append(y)
    order = sorted(states, key=lambda x: (len(x), sorted(x)))
    names = {x: '_'.join(['c'] + [str(i) for i in sorted(x)]) for x in order}
    logger.debug('set constraint automaton: {} states over {} symbols'.format(len(order), len(symbols)))
    return Nfa(tuple(names[x] for x in order), symbols,
               frozenset((names[x], s, names[y]) for x, s, y in trans), {names[start]},
               {names[everything]} if everything in states else frozenset())


def setlinear_to_odta(a, constraints):
    """
    Extended weak ODTA accepting the trees of the tree automaton `a` that satisfy
    every set and linear constraint.

    The transducer is the identity on `a`, set constraints go into the value
    automaton and the linear ones, with z_S read as |[S]_t|, form the Presburger
    constraint.
    """
    sigma = tuple(a.alphabet)
    if len(sigma) > MAX_MATERIALIZED_ALPHABET:
        raise CapExceeded('alphabet', MAX_MATERIALIZED_ALPHABET)
    check_constraints(constraints, sigma)
    bad = [c for c in constraints if not isinstance(c, (SetConstraint, LinearConstraint))]
    if bad:
        raise OrdataError('expected set and linear constraints, got {}'.format(bad[0].render()))

    m = set_constraint_automaton(sigma, [c for c in constraints if isinstance(c, SetConstraint)])
    xi = conj(*[c.formula for c in constraints if isinstance(c, LinearConstraint)])
    return ExtendedWeakODTA(WeakODTA(identity_transducer(a), m), xi)
