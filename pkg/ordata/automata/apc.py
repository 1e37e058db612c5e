from dataclasses import dataclass

from ordata import DEFAULT_SOLVER_BUDGET
from ordata.common.errors import OrdataError
from ordata.presburger.formula import free_keys, run_key, sym


@dataclass(frozen=True, eq=False)
class Apc(object):
    """
    Tree automaton with a Presburger constraint over its label counts, its
    (state, label) counts and the count keys of its marked horizontal transitions.
    """

    automaton: object
    formula: object

    def __post_init__(self):
        declared = self.count_keys()
        extra = free_keys(self.formula) - declared
        if extra:
            raise OrdataError('constraint mentions undeclared count keys {}'.format(
                sorted(k.render() for k in extra)))

    def count_keys(self):
        from ordata.presburger.parikh import transition_mark_keys

        a = self.automaton
        keys = [sym(lab) for lab in a.alphabet] + [run_key(q, lab) for (q, lab), _ in a.horizontal]
        return frozenset(keys) | frozenset(transition_mark_keys(a))


def apc_solve(apc, budget=DEFAULT_SOLVER_BUDGET, seed=None):
    """
    Decides nonemptiness of an APC.

    Returns the SolveResult and, on SAT, a (tree, run) pair whose counts satisfy the constraint.
    """
    from ordata.presburger.formula import combine
    from ordata.presburger.parikh import decode_tree, parikh_formula_ta
    from ordata.presburger.solver import solve, SAT

    phi = combine(parikh_formula_ta(apc.automaton), apc.formula)
    result = solve(phi, budget=budget, seed=seed)
    if result.status is not SAT:
        return result, None
    return result, decode_tree(apc.automaton, result.assignment, budget=budget, with_run=True)
