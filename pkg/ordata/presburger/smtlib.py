"""
SMT-LIB v2 export of existential Presburger formulas and model import.

Variables are renamed to v0, v1, ... in key order; the key map (name -> JSON-encoded
VariableKey) travels next to the script so that models read back losslessly.
"""
import json
import logging
import re

from ordata.common.errors import OrdataError, ParseError
from ordata.presburger.formula import And, Assignment, Linear, VariableKey, formula_of

logger = logging.getLogger(__name__)


def _encode(name):
    if isinstance(name, frozenset):
        return {'set': [_encode(n) for n in sorted(name, key=lambda n: json.dumps(_encode(n), sort_keys=True))]}
    if isinstance(name, tuple):
        return {'tuple': [_encode(n) for n in name]}
    if isinstance(name, (int, str)):
        return name
    raise OrdataError('variable name component {!r} cannot be exported'.format(name))


def _decode(obj):
    if isinstance(obj, dict):
        if 'set' in obj:
            return frozenset(_decode(n) for n in obj['set'])
        return tuple(_decode(n) for n in obj['tuple'])
    return obj


def _term(atom, names):
    parts = []
    for k, c in atom.coeffs:
        if c == 1:
            parts.append(names[k])
        elif c > 0:
            parts.append('(* {} {})'.format(c, names[k]))
        else:
            parts.append('(* (- {}) {})'.format(-c, names[k]))
    if not parts:
        return '0'
    if len(parts) == 1:
        return parts[0]
    return '(+ {})'.format(' '.join(parts))


def _constant(c):
    return str(c) if c >= 0 else '(- {})'.format(-c)


def _node(node, names):
    if isinstance(node, Linear):
        return '({} {} {})'.format(node.op, _term(node, names), _constant(node.rhs))
    if not node.parts:
        return 'true' if isinstance(node, And) else 'false'
    op = 'and' if isinstance(node, And) else 'or'
    return '({} {})'.format(op, ' '.join(_node(p, names) for p in node.parts))


def export_smtlib(f):
    """
    Renders `f` as an SMT-LIB v2 script over Int with nonnegativity guards.

    Returns
    -------
        (script text, key map) where the key map sends each SMT name to the JSON
        encoding of its VariableKey
    """
    f = formula_of(f)
    keys = sorted(f.keys, key=VariableKey.sort_key)
    names = {k: 'v{}'.format(i) for i, k in enumerate(keys)}

    lines = ['(set-logic QF_LIA)']
    for k in keys:
        lines.append('(declare-const {} Int) ; {}'.format(names[k], k.render()))
    for k in keys:
        lines.append('(assert (>= {} 0))'.format(names[k]))
    lines.append('(assert {})'.format(_node(f.body, names)))
    lines.append('(check-sat)')
    lines.append('(get-model)')

    key_map = {names[k]: {'kind': k.kind, 'name': _encode(k.name)} for k in keys}
    return '\n'.join(lines) + '\n', key_map


def write_smtlib(f, path):
    """ Writes the script to `path` and the key map to `path` + '.keys.json'. """
    text, key_map = export_smtlib(f)
    with open(path, 'w') as fh:
        fh.write(text)
    with open(path + '.keys.json', 'w') as fh:
        json.dump(key_map, fh, indent=1, sort_keys=True)
    return path, path + '.keys.json'


def load_key_map(path):
    with open(path) as fh:
        return json.load(fh)


_define = re.compile(r'\(define-fun\s+(\S+)\s+\(\)\s+Int\s+(\(\s*-\s*\d+\s*\)|\d+)\s*\)')


def import_model(text, key_map):
    """ Reads `(define-fun v3 () Int 7)` entries of a model back into an Assignment. """
    out = Assignment()
    for m in _define.finditer(text):
        name, raw = m.group(1), m.group(2)
        if name not in key_map:
            logger.debug('ignoring model entry for unknown name {}'.format(name))
            continue
        value = -int(re.sub(r'[()\s-]', '', raw)) if raw.startswith('(') else int(raw)
        if value < 0:
            raise ParseError('model assigns negative value {} to {}'.format(value, name))
        entry = key_map[name]
        out[VariableKey(entry['kind'], _decode(entry['name']))] = value
    return out


def solve_with_z3(f, budget):
    """ Decides `f` with z3 through the SMT-LIB export; `budget` becomes z3's resource limit in thousands. """
    try:
        import z3
    except ImportError:
        raise OrdataError('the z3 backend needs the z3-solver package (pip install z3-solver)')
    from ordata.presburger.solver import SAT, UNKNOWN, UNSAT, SolveResult

    text, key_map = export_smtlib(f)
    script = '\n'.join(line for line in text.splitlines() if not line.startswith(('(check-sat', '(get-model')))

    s = z3.Solver()
    s.set('rlimit', int(budget) * 1000)
    s.add(z3.parse_smt2_string(script))
    verdict = s.check()
    stats = {'budget': budget}

    if verdict == z3.sat:
        model = s.model()
        values = Assignment()
        for name, entry in key_map.items():
            value = model.eval(z3.Int(name), model_completion=True).as_long()
            values[VariableKey(entry['kind'], _decode(entry['name']))] = value
        return SolveResult(SAT, values, stats)
    if verdict == z3.unsat:
        return SolveResult(UNSAT, None, stats)
    stats['reason'] = s.reason_unknown()
    return SolveResult(UNKNOWN, None, stats)
