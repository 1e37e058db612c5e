import re

from ordata.common.errors import ParseError
from ordata.presburger.formula import cls, conj, ext, linear, run_key, sym, zone

_token = re.compile(r'''\s*(?:
    (?P<num>\d+)
  | (?P<zone>z_\{(?:\{[^{}]*\}\s*,?\s*)*\})
  | (?P<cls>[xz]_\{[^{}]*\})
  | (?P<tup>[xr]_\([^()]*\))
  | (?P<sym>x_[^\s{}()+*<>=,-]+)
  | (?P<op>>=|<=|=)
  | (?P<sign>[+-])
  | (?P<times>\*)
  | (?P<bad>\S)
)''', re.VERBOSE)


def _names(body):
    return [p.strip() for p in body.split(',') if p.strip()]


def _key(text, column):
    if text.startswith('z_{{'):
        inner = text[3:-1]
        blocks = re.findall(r'\{([^{}]*)\}', inner)
        if not blocks or any(not _names(b) for b in blocks):
            raise ParseError('zonal variable {!r} needs nonempty label sets'.format(text), 1, column)
        return zone([_names(b) for b in blocks])
    if text.startswith(('x_{', 'z_{')):
        names = _names(text[3:-1])
        if not names:
            raise ParseError('class variable {!r} needs a nonempty label set'.format(text), 1, column)
        return cls(names)
    if text.startswith('x_('):
        parts = _names(text[3:-1])
        if len(parts) != 3:
            raise ParseError('extended variable {!r} needs (label,state,output)'.format(text), 1, column)
        return ext(*parts)
    if text.startswith('r_('):
        parts = _names(text[3:-1])
        if len(parts) != 2:
            raise ParseError('run variable {!r} needs (state,label)'.format(text), 1, column)
        return run_key(*parts)
    return sym(text[2:])


def parse_linear_atom(text):
    """
    Parses one linear constraint such as `2*x_a + x_{a,b} >= z_{{a},{b}} + 1`.

    Variables: x_a (label count), x_{a,b} (class count, also z_{a,b}), z_{{a},{a,b}} (zonal class
    count), x_(a,q,α) (extended label count) and r_(q,a) (state count). Both sides may
    mix terms and constants; everything is moved to the left.
    """
    coeffs = {}
    const = 0
    op = None
    side = 1
    sign = 1
    factor = None
    expect_term = True
    pos = 0
    text = text.strip()

    while pos < len(text):
        m = _token.match(text, pos)
        if m is None or m.end() == pos:
            break
        col = m.start() + len(m.group(0)) - len(m.group(0).lstrip()) + 1
        kind = m.lastgroup
        value = m.group(kind)
        pos = m.end()

        if kind == 'bad':
            raise ParseError('unexpected character {!r} in linear constraint'.format(value), 1, col)
        if kind == 'op':
            if op is not None or expect_term:
                raise ParseError('misplaced comparison {!r}'.format(value), 1, col)
            op, side, sign, expect_term = value, -1, 1, True
        elif kind == 'sign':
            if not expect_term:
                expect_term = True
                sign = 1
            sign *= 1 if value == '+' else -1
        elif kind == 'num':
            if not expect_term:
                raise ParseError('missing operator before {}'.format(value), 1, col)
            factor = int(value)
            m2 = _token.match(text, pos)
            if m2 is not None and m2.lastgroup == 'times':
                pos = m2.end()
                continue
            const += side * sign * factor
            factor, sign, expect_term = None, 1, False
        elif kind == 'times':
            raise ParseError('misplaced *', 1, col)
        else:
            if not expect_term:
                raise ParseError('missing operator before {}'.format(value), 1, col)
            k = _key(value, col)
            c = side * sign * (1 if factor is None else factor)
            coeffs[k] = coeffs.get(k, 0) + c
            factor, sign, expect_term = None, 1, False

    if op is None:
        raise ParseError('linear constraint {!r} has no comparison'.format(text), 1, 1)
    if expect_term or factor is not None:
        raise ParseError('linear constraint {!r} ends early'.format(text), 1, len(text) + 1)
    return linear(coeffs, op, -const)


def parse_linear_system(lines):
    """ Conjunction of one constraint per nonblank line; '#' starts a comment. """
    atoms = []
    for i, raw in enumerate(lines):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            atoms.append(parse_linear_atom(line))
        except ParseError as e:
            raise ParseError(e.reason, i + 1, e.column)
    return conj(*atoms)

