"""
Integrity, set and linear constraints over ordered-data trees, with direct evaluation.
"""
from dataclasses import dataclass

from ordata import MAX_MATERIALIZED_ALPHABET
from ordata.common.errors import CapExceeded, UnknownSymbolError
from ordata.common.utils import nonempty_subsets
from ordata.core.values import count, value_classes, value_sets
from ordata.presburger.formula import cls, evaluate, free_keys, sym


@dataclass(frozen=True)
class Key(object):
    """ key(a): a-nodes carry pairwise distinct values. """

    label: str

    def render(self):
        return 'key({})'.format(self.label)


@dataclass(frozen=True)
class Inclusion(object):
    """ V(a) ⊆ V(b) """

    left: str
    right: str

    def render(self):
        return 'incl({},{})'.format(self.left, self.right)


@dataclass(frozen=True)
class Var(object):
    label: str

    def render(self):
        return 'V({})'.format(self.label)


@dataclass(frozen=True)
class Union(object):
    left: object
    right: object

    def render(self):
        return '({} | {})'.format(self.left.render(), self.right.render())


@dataclass(frozen=True)
class Inter(object):
    left: object
    right: object

    def render(self):
        return '({} & {})'.format(self.left.render(), self.right.render())


@dataclass(frozen=True)
class Compl(object):
    term: object

    def render(self):
        return '!({})'.format(self.term.render())


@dataclass(frozen=True)
class SetConstraint(object):
    """ τ = ∅ (nonempty False) or τ ≠ ∅ (nonempty True). """

    term: object
    nonempty: bool

    def render(self):
        return 'set: {} {} empty'.format(self.term.render(), '!=' if self.nonempty else '=')


@dataclass(frozen=True)
class LinearConstraint(object):
    """ A Presburger formula over x_a (label counts) and z_S (class sizes |[S]_t|). """

    formula: object

    def render(self):
        return 'lin: {}'.format(self.formula.render())


def term_labels(term):
    if isinstance(term, Var):
        return {term.label}
    if isinstance(term, Compl):
        return term_labels(term.term)
    return term_labels(term.left) | term_labels(term.right)


def constraint_labels(c):
    if isinstance(c, Key):
        return {c.label}
    if isinstance(c, Inclusion):
        return {c.left, c.right}
    if isinstance(c, SetConstraint):
        return term_labels(c.term)
    labels = set()
    for k in free_keys(c.formula):
        labels |= {k.name} if k.kind == 'sym' else set(k.name)
    return labels


def check_constraints(constraints, sigma):
    sigma = set(sigma)
    for c in constraints:
        for a in constraint_labels(c):
            if a not in sigma:
                raise UnknownSymbolError(a, 'constraint alphabet')


def sterm_family(term, sigma, limit=MAX_MATERIALIZED_ALPHABET):
    """
    𝕊(τ): the nonempty S ⊆ Σ with ⟦τ⟧_t = ∪_{S∈𝕊(τ)} [S]_t on every tree t.

    Returns a frozenset of frozensets.
    """
    if len(set(sigma)) > limit:
        raise CapExceeded('alphabet', limit, '𝕊(τ) over {} labels exceeds the materialization limit {}'.format(
            len(set(sigma)), limit))
    check_constraints([SetConstraint(term, True)], sigma)
    return frozenset(s for s in nonempty_subsets(sigma) if _member(term, s))


def _member(term, s):
    """ S ∈ 𝕊(τ) """
    if isinstance(term, Var):
        return term.label in s
    if isinstance(term, Compl):
        return not _member(term.term, s)
    if isinstance(term, Union):
        return _member(term.left, s) or _member(term.right, s)
    return _member(term.left, s) and _member(term.right, s)


def evaluate_term(term, t):
    """ ⟦τ⟧_t as a frozenset of values. """
    if isinstance(term, Var):
        return value_sets(t).get(term.label, frozenset())
    if isinstance(term, Compl):
        return frozenset(t.values) - evaluate_term(term.term, t)
    left, right = evaluate_term(term.left, t), evaluate_term(term.right, t)
    return left | right if isinstance(term, Union) else left & right


def counting_assignment(t):
    """ x_a and z_S of a tree, as read by linear constraints. """
    v = {sym(a): count(t, a) for a in set(t.labels)}
    v.update({cls(s): len(vs) for s, vs in value_classes(t).items()})
    return v


def satisfies(constraint, t):
    """ Direct evaluation of one constraint on the tree t. """
    if isinstance(constraint, Key):
        vals = [v for lab, v in zip(t.labels, t.values) if lab == constraint.label]
        return len(vals) == len(set(vals))
    if isinstance(constraint, Inclusion):
        sets = value_sets(t)
        return sets.get(constraint.left, frozenset()) <= sets.get(constraint.right, frozenset())
    if isinstance(constraint, SetConstraint):
        return bool(evaluate_term(constraint.term, t)) == constraint.nonempty
    return evaluate(constraint.formula, counting_assignment(t))


def satisfies_all(constraints, t):
    return all(satisfies(c, t) for c in constraints)


def render_constraints(constraints):
    return '\n'.join(c.render() for c in canonical_sorted_constraints(constraints)) + '\n'


def canonical_sorted_constraints(constraints):
    order = {Key: 0, Inclusion: 1, SetConstraint: 2, LinearConstraint: 3}
    return sorted(constraints, key=lambda c: (order[type(c)], c.render()))
