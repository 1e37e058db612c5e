import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ordata import DEFAULT_SEED, DEFAULT_SOLVER_BUDGET
from ordata.common.errors import CapExceeded, VerificationError
from ordata.presburger.formula import And, Assignment, Linear, Or, evaluate, formula_of

logger = logging.getLogger(__name__)

# coefficients beyond this cannot be represented exactly in the floating point leaves
MAX_EXACT = 2 ** 53
PROPAGATION_ROUNDS = 25
LEAF_NODE_LIMIT = 2000


class Status(Enum):
    SAT = 'sat'
    UNSAT = 'unsat'
    UNKNOWN = 'unknown'


SAT, UNSAT, UNKNOWN = Status.SAT, Status.UNSAT, Status.UNKNOWN


@dataclass
class SolveResult(object):
    status: Status
    assignment: Assignment = None
    stats: dict = field(default_factory=dict)

    @property
    def sat(self):
        return self.status is SAT


def _flatten(node, atoms, ors):
    """ Splits a positive formula into its conjunctive atoms and pending disjunctions. """
    if isinstance(node, Linear):
        atoms.append(node)
    elif isinstance(node, And):
        for p in node.parts:
            _flatten(p, atoms, ors)
    else:
        if len(node.parts) == 1:
            _flatten(node.parts[0], atoms, ors)
        else:
            ors.append(node)


class _Search(object):
    """ Branch and bound over disjunctions with integer programming leaves. """

    def __init__(self, f, budget):
        self.f = f
        self.budget = budget
        self.nodes = 0
        self.milp_calls = 0
        self.max_depth = 0
        self.pruned = 0
        self.incomplete = False

        order = []
        seen = set()
        for k in self._keys_in_order(f.body):
            if k not in seen:
                seen.add(k)
                order.append(k)
        self.keys = order
        self.index = {k: i for i, k in enumerate(order)}

    def _keys_in_order(self, node):
        if isinstance(node, Linear):
            for k, c in node.coeffs:
                if abs(c) > MAX_EXACT:
                    raise CapExceeded('coefficient', MAX_EXACT)
                yield k
            if abs(node.rhs) > MAX_EXACT:
                raise CapExceeded('constant', MAX_EXACT)
        else:
            for p in node.parts:
                yield from self._keys_in_order(p)

    def stats(self):
        return {'nodes': self.nodes, 'milp_calls': self.milp_calls, 'max_depth': self.max_depth,
                'pruned': self.pruned, 'variables': len(self.keys), 'budget': self.budget}

    # interval propagation
    def propagate(self, atoms, lo, hi):
        """ Tightens [lo, hi] in place; False if some atom is unsatisfiable over the box. """
        for _ in range(PROPAGATION_ROUNDS):
            changed = False
            for atom in atoms:
                rows = []
                if atom.op in ('<=', '='):
                    rows.append((atom.coeffs, atom.rhs))
                if atom.op in ('>=', '='):
                    rows.append(([(k, -c) for k, c in atom.coeffs], -atom.rhs))
                for coeffs, rhs in rows:
                    # Σ c_i x_i <= rhs
                    mins = []
                    for k, c in coeffs:
                        i = self.index[k]
                        mins.append(c * lo[i] if c > 0 else c * hi[i])
                    total_min = sum(mins)
                    if total_min > rhs:
                        return False
                    if math.isinf(total_min):
                        continue
                    for (k, c), m in zip(coeffs, mins):
                        i = self.index[k]
                        slack = rhs - (total_min - m)
                        if c > 0:
                            bound = math.floor(slack / c) if not math.isinf(slack) else math.inf
                            if bound < hi[i]:
                                hi[i] = bound
                                changed = True
                        else:
                            bound = math.ceil(slack / c) if not math.isinf(slack) else -math.inf
                            if bound > lo[i]:
                                lo[i] = bound
                                changed = True
                        if lo[i] > hi[i]:
                            return False
            if not changed:
                break
        return True

    def viable(self, node, lo, hi):
        """ Cheap check whether a disjunct can hold inside the box. """
        atoms, _ = [], []
        _flatten(node, atoms, _)
        for atom in atoms:
            smin = smax = 0
            for k, c in atom.coeffs:
                i = self.index[k]
                if c > 0:
                    smin += c * lo[i]
                    smax += c * hi[i]
                else:
                    smin += c * hi[i]
                    smax += c * lo[i]
            if atom.op in ('<=', '=') and smin > atom.rhs:
                return False
            if atom.op in ('>=', '=') and smax < atom.rhs:
                return False
        return True

    def leaf(self, atoms, lo, hi):
        """ Solves the conjunctive core; returns ('sat', x), ('infeasible', None) or ('unknown', None). """
        n = len(self.keys)
        if n == 0:
            return ('sat', []) if all(a.holds({}) for a in atoms) else ('infeasible', None)

        self.milp_calls += 1
        rows = []
        lbs, ubs = [], []
        for atom in atoms:
            row = np.zeros(n)
            for k, c in atom.coeffs:
                row[self.index[k]] = c
            rows.append(row)
            lbs.append(atom.rhs if atom.op in ('=', '>=') else -np.inf)
            ubs.append(atom.rhs if atom.op in ('=', '<=') else np.inf)

        constraints = None
        if rows:
            constraints = LinearConstraint(np.vstack(rows), np.array(lbs, dtype=float), np.array(ubs, dtype=float))
        bounds = Bounds(np.array(lo, dtype=float), np.array(hi, dtype=float))
        res = milp(c=np.ones(n), constraints=constraints, integrality=np.ones(n), bounds=bounds,
                   options={'node_limit': LEAF_NODE_LIMIT, 'presolve': True})

        if res.status == 2:
            return 'infeasible', None
        if res.x is None:
            return 'unknown', None

        x = [int(round(v)) for v in res.x]
        values = {k: x[i] for k, i in self.index.items()}
        if not all(a.holds(values) for a in atoms) or any(v < 0 for v in x):
            logger.debug('rounded leaf solution violates the core, treating branch as undecided')
            return 'unknown', None
        return 'sat', x

    def run(self):
        atoms, ors = [], []
        _flatten(self.f.body, atoms, ors)
        n = len(self.keys)
        stack = [(atoms, ors, [0] * n, [math.inf] * n, 0)]

        while stack:
            atoms, ors, lo, hi, depth = stack.pop()
            lo, hi = list(lo), list(hi)

            if self.nodes >= self.budget:
                self.incomplete = True
                break
            self.nodes += 1
            self.max_depth = max(self.max_depth, depth)

            # unit propagation over disjunctions
            atoms, ors = list(atoms), list(ors)
            feasible = self.propagate(atoms, lo, hi)
            while feasible:
                committed = False
                remaining = []
                for o in ors:
                    options = [p for p in o.parts if self.viable(p, lo, hi)]
                    if not options:
                        feasible = False
                        break
                    if len(options) == 1:
                        _flatten(options[0], atoms, remaining)
                        committed = True
                    else:
                        remaining.append(o if len(options) == len(o.parts) else Or(tuple(options)))
                if not feasible:
                    break
                ors = remaining
                if not committed:
                    break
                feasible = self.propagate(atoms, lo, hi)

            if not feasible:
                self.pruned += 1
                continue

            outcome, x = self.leaf(atoms, lo, hi)
            if outcome == 'infeasible':
                self.pruned += 1
                continue
            if outcome == 'unknown':
                self.incomplete = True
                continue

            values = Assignment({k: x[i] for k, i in self.index.items()})
            violated = [o for o in ors if not evaluate(o, values)]
            if not violated:
                return values

            # branch on the most constrained violated disjunction, ties by declaration order
            def width(o):
                return sum(1 for p in o.parts if self.viable(p, lo, hi))

            target = min(violated, key=width)
            rest = [o for o in ors if o is not target]
            options = [p for p in target.parts if self.viable(p, lo, hi)]
            # push in reverse so the first option is explored first
            for p in reversed(options):
                branch_atoms, branch_ors = list(atoms), list(rest)
                _flatten(p, branch_atoms, branch_ors)
                stack.append((branch_atoms, branch_ors, lo, hi, depth + 1))
        return None


def solve(f, budget=None, seed=None, backend='internal'):
    """
    Decides satisfiability of an existential Presburger formula over naturals.

    Parameters
    ----------
    f: PresburgerFormula
        formula to decide
    budget: int
        maximal number of search nodes, each solving one integer program
    seed: int
        recorded in the statistics; the search itself is deterministic
    backend: str
        'internal' or 'z3' (needs z3-solver)

    Returns
    -------
        SolveResult with status SAT, UNSAT or UNKNOWN. SAT assignments cover every
        variable of the formula and are re-verified by substitution.
    """
    f = formula_of(f)
    budget = DEFAULT_SOLVER_BUDGET if budget is None else budget
    seed = DEFAULT_SEED if seed is None else seed

    if backend == 'z3':
        from ordata.presburger.smtlib import solve_with_z3
        result = solve_with_z3(f, budget)
    else:
        search = _Search(f, budget)
        assignment = search.run()
        stats = search.stats()
        if assignment is not None:
            result = SolveResult(SAT, assignment, stats)
        elif search.incomplete:
            logger.debug('solver budget exhausted after {} nodes'.format(search.nodes))
            result = SolveResult(UNKNOWN, None, stats)
        else:
            result = SolveResult(UNSAT, None, stats)

    result.stats['seed'] = seed
    result.stats['backend'] = backend
    if result.status is SAT:
        for k in f.keys:
            result.assignment.setdefault(k, 0)
        if not evaluate(f, result.assignment):
            raise VerificationError('solver returned an assignment violating the formula: {}'.format(
                result.assignment.render()))
    return result
