"""
ODTA bundle files: the sectioned automaton format plus

    [kind]             weak | odta | extended | string
    [gamma]            output alphabet
    [output]           lines `q label... -> b`
    [gamma0]           distinctness labels (optional)
    [value-automaton]  word automaton over set symbols {a,b}
    [presburger]       one linear constraint per line, `|` separating disjuncts
                       (extended only)

String bundles replace [value-automaton] by a value tree automaton written with the
`value-` prefixed tree automaton sections ([value-alphabet], [value-horiz q {a,b}], ...).
"""
import logging

from ordata.automata.formats import items, parse_input_label, parse_nfa_block, parse_set_symbol, \
    parse_tree_automaton, read_sections, render_labels, render_nfa_block, render_tree_automaton, \
    sections_by_name, unique_names
from ordata.automata.transducer import TreeTransducer
from ordata.common.errors import OrdataError, ParseError
from ordata.common.utils import canonical_sorted, render_symbol
from ordata.odta.automaton import ODTA, ExtendedWeakODTA, StringWeakODTA, WeakODTA
from ordata.presburger.formula import And, Linear, Or, conj, disj
from ordata.presburger.syntax import parse_linear_atom

logger = logging.getLogger(__name__)

KINDS = ('weak', 'odta', 'extended', 'string')


def _one(table, name, required=True):
    found = table.get(name)
    if not found:
        if required:
            raise ParseError('missing section [{}]'.format(name))
        return None
    return found[0]


def _outputs(section, profiled):
    outputs = set()
    for line, text in section.lines:
        lhs, sep, rhs = text.partition('->')
        head, target = items(lhs), rhs.strip()
        if not sep or len(head) < 2 or not target or len(items(target)) != 1:
            raise ParseError('output must read `q label... -> b`', line, 1)
        q = head[0]
        for token in head[1:]:
            for lab in parse_input_label(token, profiled, line):
                outputs.add((q, lab, target))
    return frozenset(outputs)


def _constraint(section):
    atoms = []
    for line, text in section.lines:
        try:
            atoms.append(disj(*[parse_linear_atom(part) for part in text.split('|')]))
        except ParseError as e:
            raise ParseError(e.reason, line, e.column)
    return conj(*atoms)


def parse_bundle(text):
    """
    Reads an ODTA bundle.

    Returns
    -------
        WeakODTA, ODTA, ExtendedWeakODTA or StringWeakODTA according to [kind]
    """
    table = sections_by_name(read_sections(text), unique=(
        'kind', 'alphabet', 'states', 'final', 'gamma', 'output', 'gamma0', 'value-automaton', 'presburger'))
    kind_section = _one(table, 'kind')
    kind = ' '.join(kind_section.tokens())
    if kind not in KINDS:
        raise ParseError('unknown kind {!r}, expected one of {}'.format(kind, ', '.join(KINDS)), kind_section.line, 1)

    profiled = kind == 'odta'
    base = parse_tree_automaton(table, profiled=profiled)
    gamma = _one(table, 'gamma').tokens()
    outputs = _outputs(_one(table, 'output'), profiled)
    g0 = _one(table, 'gamma0', required=False)
    gamma0 = frozenset(g0.tokens()) if g0 else frozenset()

    try:
        tr = TreeTransducer(base, tuple(gamma), outputs)
        if kind == 'string':
            value_tree = parse_tree_automaton(table, prefix='value-')
            return StringWeakODTA(tr, value_tree, gamma0)

        m = parse_nfa_block(_one(table, 'value-automaton'), parse_symbol=parse_set_symbol)
        s = ODTA(tr, m, gamma0) if profiled else WeakODTA(tr, m, gamma0)
        if kind == 'extended':
            return ExtendedWeakODTA(s, _constraint(_one(table, 'presburger')))
    except ParseError:
        raise
    except OrdataError as e:
        raise ParseError(e.message)
    if table.get('presburger'):
        logger.warning('[presburger] is only read for extended bundles, ignoring it')
    return s


def _render_constraint(f):
    lines = []
    for part in (f.parts if isinstance(f, And) else (f,)):
        if isinstance(part, Linear):
            lines.append(part.render())
        elif isinstance(part, Or) and all(isinstance(p, Linear) for p in part.parts):
            lines.append(' | '.join(p.render() for p in part.parts))
        else:
            raise OrdataError('only conjunctions of linear atoms and their disjunctions can be written')
    return lines


def serialize_bundle(s):
    """ Canonical text of a bundle; parse_bundle reads it back to an equivalent automaton. """
    if isinstance(s, ExtendedWeakODTA):
        kind, core = 'extended', s.base
        if core.profiled:
            raise OrdataError('extended bundles hold weak ODTA')
    elif isinstance(s, StringWeakODTA):
        kind, core = 'string', s
    elif isinstance(s, (WeakODTA, ODTA)):
        kind, core = ('odta' if s.profiled else 'weak'), s
    else:
        raise OrdataError('cannot write {}'.format(type(s).__name__))

    profiled = kind == 'odta'
    tr = core.transducer
    names = unique_names(tr.states, 'states')
    lines = ['[kind]', kind]
    lines += render_tree_automaton(tr.base, profiled=profiled)
    lines += ['[gamma]', ' '.join(render_symbol(b) for b in tr.output_alphabet), '[output]']

    groups = {}
    for q, a, b in tr.outputs:
        groups.setdefault((q, b), []).append(a)
    for (q, b) in canonical_sorted(groups):
        labels = [lab for lab in tr.input_alphabet if lab in set(groups[(q, b)])]
        lines.append('{} {} -> {}'.format(names[q], ' '.join(render_labels(labels, profiled)), render_symbol(b)))

    if core.gamma0:
        lines += ['[gamma0]', ' '.join(render_symbol(b) for b in canonical_sorted(core.gamma0))]
    if kind == 'string':
        lines += render_tree_automaton(core.value_tree_automaton, prefix='value-')
    else:
        lines.append('[value-automaton]')
        lines += render_nfa_block(core.value_automaton)
    if kind == 'extended':
        lines.append('[presburger]')
        lines += _render_constraint(s.constraint)
    return '\n'.join(lines) + '\n'


def load_bundle(path):
    with open(path) as f:
        return parse_bundle(f.read())


def write_bundle(s, path):
    with open(path, 'w') as f:
        f.write(serialize_bundle(s))
