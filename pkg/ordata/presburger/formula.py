from dataclasses import dataclass
from functools import cached_property

from ordata.common.errors import OrdataError
from ordata.common.utils import canonical_key, render_symbol

KINDS = ('sym', 'cls', 'zone', 'ext', 'run', 'aux')

_prefix = {
    'sym': 'x_',
    'cls': 'x_',
    'zone': 'z_',
    'ext': 'x_',
    'run': 'r_',
    'aux': '_',
}


@dataclass(frozen=True)
class VariableKey(object):
    """
    Tagged name of a counting variable.

    kinds: sym (label count x_a), cls (class count x_S), zone (zonal class count z_P),
    ext (extended label count x_(a,q,α)), run ((state, label) count) and aux
    (auxiliary variables of encodings).
    """

    kind: str
    name: object

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OrdataError('unknown variable kind {!r}'.format(self.kind))

    def render(self):
        if self.kind in ('cls', 'zone'):
            return _prefix[self.kind] + render_symbol(self.name)
        if self.kind in ('ext', 'run'):
            return _prefix[self.kind] + '(' + ','.join(render_symbol(p) for p in self.name) + ')'
        return _prefix[self.kind] + render_symbol(self.name)

    def __str__(self):
        return self.render()

    def sort_key(self):
        return KINDS.index(self.kind), canonical_key(self.name)


def sym(a):
    return VariableKey('sym', a)


def cls(s):
    return VariableKey('cls', frozenset(s))


def zone(p):
    return VariableKey('zone', frozenset(frozenset(s) for s in p))


def ext(a, q, alpha):
    return VariableKey('ext', (a, q, alpha))


def run_key(q, a):
    return VariableKey('run', (q, a))


def aux(*parts):
    return VariableKey('aux', tuple(parts))


_ops = ('=', '<=', '>=')


@dataclass(frozen=True)
class Linear(object):
    """ Σ c_i·v_i ⋈ rhs with ⋈ one of =, <=, >= over naturals. """

    coeffs: tuple
    op: str
    rhs: int

    def __post_init__(self):
        if self.op not in _ops:
            raise OrdataError('unknown comparison {!r}'.format(self.op))
        merged = {}
        for k, c in self.coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise OrdataError('coefficient {!r} is not an integer'.format(c))
            merged[k] = merged.get(k, 0) + c
        object.__setattr__(self, 'coeffs', tuple(sorted(((k, c) for k, c in merged.items() if c != 0),
                                                        key=lambda e: e[0].sort_key())))
        if isinstance(self.rhs, bool) or not isinstance(self.rhs, int):
            raise OrdataError('constant {!r} is not an integer'.format(self.rhs))

    def keys(self):
        return {k for k, _ in self.coeffs}

    def lhs_value(self, assignment):
        return sum(c * assignment.get(k, 0) for k, c in self.coeffs)

    def holds(self, assignment):
        lhs = self.lhs_value(assignment)
        if self.op == '=':
            return lhs == self.rhs
        if self.op == '<=':
            return lhs <= self.rhs
        return lhs >= self.rhs

    def render(self):
        terms = []
        for k, c in self.coeffs:
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            body = k.render() if mag == 1 else '{}*{}'.format(mag, k.render())
            terms.append((sign, body))
        if not terms:
            lhs = '0'
        else:
            lhs = ('-' if terms[0][0] == '-' else '') + terms[0][1]
            for sign, body in terms[1:]:
                lhs += ' {} {}'.format(sign, body)
        return '{} {} {}'.format(lhs, self.op, self.rhs)

    def __str__(self):
        return self.render()


@dataclass(frozen=True)
class And(object):
    parts: tuple

    def render(self):
        if not self.parts:
            return 'true'
        return '(' + ' ∧ '.join(p.render() for p in self.parts) + ')'


@dataclass(frozen=True)
class Or(object):
    parts: tuple

    def render(self):
        if not self.parts:
            return 'false'
        return '(' + ' ∨ '.join(p.render() for p in self.parts) + ')'


TRUE = And(())
FALSE = Or(())


def linear(coeffs, op, rhs):
    """ `coeffs` is a dict or (key, coefficient) pairs. """
    items = coeffs.items() if isinstance(coeffs, dict) else coeffs
    return Linear(tuple(items), op, rhs)


def eq(coeffs, rhs):
    return linear(coeffs, '=', rhs)


def ge(coeffs, rhs):
    return linear(coeffs, '>=', rhs)


def le(coeffs, rhs):
    return linear(coeffs, '<=', rhs)


def total(keys, coefficient=1):
    """ Coefficient map Σ keys, accumulating repeated keys. """
    out = {}
    for k in keys:
        out[k] = out.get(k, 0) + coefficient
    return out


def minus(lhs, rhs):
    """ Coefficient map lhs - rhs. """
    out = dict(lhs)
    for k, c in rhs.items():
        out[k] = out.get(k, 0) - c
    return out


def conj(*parts):
    flat = []
    for p in parts:
        if isinstance(p, PresburgerFormula):
            p = p.body
        if isinstance(p, And):
            flat.extend(p.parts)
        else:
            flat.append(p)
    return And(tuple(flat))


def disj(*parts):
    flat = []
    for p in parts:
        if isinstance(p, PresburgerFormula):
            p = p.body
        if isinstance(p, Or):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


@dataclass(frozen=True)
class PresburgerFormula(object):
    """
    ∃ quantified . body, with body a positive combination of linear constraints over naturals.

    Only free variables carry meaning for callers; values of quantified ones are
    still reported by the solver.
    """

    body: object
    quantified: frozenset = frozenset()

    @cached_property
    def keys(self):
        return frozenset(_keys(self.body))

    @property
    def parts(self):
        return self.body.parts if isinstance(self.body, (And, Or)) else (self.body,)

    def render(self):
        head = ''
        if self.quantified:
            head = '∃ ' + ', '.join(k.render() for k in sorted(self.quantified, key=VariableKey.sort_key)) + '. '
        return head + self.body.render()


def exists(quantified, *parts):
    """ Builds ∃ quantified. ∧ parts, merging the quantifier prefixes of nested formulas. """
    q = set(quantified)
    for p in parts:
        if isinstance(p, PresburgerFormula):
            q |= p.quantified
    return PresburgerFormula(conj(*parts), frozenset(q))


def formula_of(f):
    if isinstance(f, PresburgerFormula):
        return f
    return PresburgerFormula(f, frozenset())


def combine(*fs):
    """ Conjunction of formulas with the union of their quantifier prefixes. """
    return exists((), *fs)


def _keys(node):
    if isinstance(node, PresburgerFormula):
        yield from _keys(node.body)
    elif isinstance(node, Linear):
        yield from node.keys()
    else:
        for p in node.parts:
            yield from _keys(p)


def all_keys(f):
    return frozenset(_keys(f))


def free_keys(f):
    f = formula_of(f)
    return f.keys - f.quantified


def atoms(node):
    if isinstance(node, PresburgerFormula):
        yield from atoms(node.body)
    elif isinstance(node, Linear):
        yield node
    else:
        for p in node.parts:
            yield from atoms(p)


def evaluate(f, assignment):
    """ Truth of the body under `assignment`; keys missing from the assignment read as 0. """
    node = f.body if isinstance(f, PresburgerFormula) else f
    if isinstance(node, Linear):
        return node.holds(assignment)
    if isinstance(node, And):
        return all(evaluate(p, assignment) for p in node.parts)
    return any(evaluate(p, assignment) for p in node.parts)


def formula_size(f):
    """ (number of variables, number of atoms) """
    return len(all_keys(f)), sum(1 for _ in atoms(f))


class Assignment(dict):
    """ VariableKey -> natural. Missing keys read as 0 through indexing. """

    def __missing__(self, key):
        return 0

    def project(self, kind):
        return {k: v for k, v in self.items() if k.kind == kind}

    def restrict(self, keys):
        return Assignment({k: self[k] for k in keys})

    def render(self):
        return ', '.join('{}={}'.format(k.render(), v) for k, v in sorted(self.items(), key=lambda e: e[0].sort_key()))
