import re

from ordata import MAX_VALUE
from ordata.common.errors import OrdataError, ParseError
from ordata.core.trees import LabeledTree, OrderedDataTree, StringDataTree

_token = re.compile(r'\s*(?:(\()|(\))|(@)|"([^"]*)"|([A-Za-z_][A-Za-z0-9_]*)|(\d+)|(\S))')


def _tokenize(text):
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def where(offset):
        line = max(i for i, s in enumerate(line_starts) if s <= offset)
        return line + 1, offset - line_starts[line] + 1

    tokens = []
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        m = _token.match(text, pos)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        line, col = where(start)
        if m.group(7) is not None:
            raise ParseError('unexpected character {!r}'.format(m.group(7)), line, col)
        if m.group(1):
            tokens.append(('(', None, line, col))
        elif m.group(2):
            tokens.append((')', None, line, col))
        elif m.group(3):
            tokens.append(('@', None, line, col))
        elif m.group(4) is not None:
            tokens.append(('str', m.group(4), line, col))
        elif m.group(5):
            tokens.append(('label', m.group(5), line, col))
        else:
            tokens.append(('int', m.group(6), line, col))
        pos = m.end()
    return tokens


def parse_tree(text):
    """
    Parses the canonical tree format `(a@2 (b@1) (c@2))`.

    Returns an OrderedDataTree for decimal values, a StringDataTree for quoted
    bit-strings and a LabeledTree if no node carries a value.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError('empty input: trees are nonempty', 1, 1)
    pos = 0
    kinds = set()

    def expect(kind):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError('unexpected end of input, expected {!r}'.format(kind))
        tok = tokens[pos]
        if tok[0] != kind:
            raise ParseError('expected {!r}, found {!r}'.format(kind, tok[1] or tok[0]), tok[2], tok[3])
        pos += 1
        return tok

    def node():
        nonlocal pos
        expect('(')
        label = expect('label')[1]
        value = None
        if pos < len(tokens) and tokens[pos][0] == '@':
            pos += 1
            if pos >= len(tokens):
                raise ParseError('unexpected end of input, expected a value')
            kind, raw, line, col = tokens[pos]
            pos += 1
            if kind == 'int':
                value = int(raw)
                if value > MAX_VALUE:
                    raise ParseError('value {} exceeds 64 bits'.format(raw), line, col)
            elif kind == 'str':
                if not raw or set(raw) - {'0', '1'}:
                    raise ParseError('string value {!r} is not a nonempty bit-string'.format(raw), line, col)
                value = raw
            else:
                raise ParseError('expected a value after @', line, col)
            kinds.add(kind)
        else:
            kinds.add('none')
        kids = []
        while pos < len(tokens) and tokens[pos][0] == '(':
            kids.append(node())
        expect(')')
        return label, value, kids

    nested = node()
    if pos != len(tokens):
        tok = tokens[pos]
        raise ParseError('trailing input after the root node', tok[2], tok[3])
    if len(kinds) > 1:
        raise ParseError('nodes mix value kinds {}'.format(sorted(kinds)))

    kind = kinds.pop()
    try:
        if kind == 'none':
            def strip(n):
                return n[0], [strip(k) for k in n[2]]
            return LabeledTree.from_nested(strip(nested))
        if kind == 'str':
            return StringDataTree.from_nested(nested)
        return OrderedDataTree.from_nested(nested)
    except OrdataError as e:
        raise ParseError(e.message)


def serialize_tree(t):
    """ Canonical single-line rendering, the inverse of parse_tree on its own output. """
    values = getattr(t, 'values', None)
    quoted = isinstance(t, StringDataTree)

    def render(u):
        head = str(t.labels[u])
        if values is not None:
            head += '@"{}"'.format(values[u]) if quoted else '@{}'.format(values[u])
        parts = [head] + [render(c) for c in t.children[u]]
        return '(' + ' '.join(parts) + ')'

    return render(0)
