import re

from ordata.automata.nfa import Nfa
from ordata.common.errors import ParseError, UnknownSymbolError

_token = re.compile(r'\s*(?:(?P<name>[A-Za-z0-9_.]+)|(?P<op>[|*+?()~])|(?P<bad>\S))')


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _token.match(text, pos)
        col = m.start(m.lastgroup) + 1
        if m.lastgroup == 'bad':
            raise ParseError('unexpected character {!r} in regular expression'.format(m.group('bad')), 1, col)
        tokens.append((m.lastgroup, m.group(m.lastgroup), col))
        pos = m.end()
    return tokens


class _Glushkov(object):
    """ Recursive descent over the expression, computing Glushkov position sets on the way up. """

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.symbols = []
        self.follow = []

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, None)

    def position(self, name):
        self.symbols.append(name)
        self.follow.append(set())
        return len(self.symbols) - 1

    def alternation(self):
        nullable, first, last = self.concatenation()
        while self.peek()[1] == '|':
            self.pos += 1
            n2, f2, l2 = self.concatenation()
            nullable, first, last = nullable or n2, first | f2, last | l2
        return nullable, first, last

    def concatenation(self):
        nullable, first, last = True, set(), set()
        while self.peek()[0] == 'name' or self.peek()[1] in ('(', '~'):
            n2, f2, l2 = self.postfix()
            for p in last:
                self.follow[p] |= f2
            first = first | f2 if nullable else first
            last = last | l2 if n2 else l2
            nullable = nullable and n2
        return nullable, first, last

    def postfix(self):
        nullable, first, last = self.atom()
        while self.peek()[1] in ('*', '+', '?'):
            op = self.peek()[1]
            self.pos += 1
            if op in ('*', '+'):
                for p in last:
                    self.follow[p] |= first
            if op in ('*', '?'):
                nullable = True
        return nullable, first, last

    def atom(self):
        kind, value, col = self.peek()
        self.pos += 1
        if kind == 'name':
            p = self.position(value)
            return False, {p}, {p}
        if value == '~':
            return True, set(), set()
        result = self.alternation()
        kind, value, col = self.peek()
        if value != ')':
            raise ParseError('missing closing parenthesis', 1, col)
        self.pos += 1
        return result


def compile_regex(expr, alphabet=None):
    """
    Compiles a regular expression into an epsilon-free NFA (Glushkov construction).

    Symbols are names of letters, digits, '_' and '.', separated by whitespace;
    operators are |, *, +, ?, parentheses and ~ for the empty word. An empty
    expression denotes the empty word as well.

    Parameters
    ----------
    expr: str
        the expression
    alphabet: iterable
        alphabet of the result; symbols of `expr` outside it raise UnknownSymbolError.
        Defaults to the symbols occurring in `expr`.
    """
    tokens = _tokenize(expr)
    g = _Glushkov(tokens)
    nullable, first, last = g.alternation()
    if g.pos != len(tokens):
        raise ParseError('unexpected {!r} in regular expression'.format(tokens[g.pos][1]), 1, tokens[g.pos][2])

    if alphabet is None:
        alphabet = tuple(dict.fromkeys(g.symbols))
    alphabet = tuple(alphabet)
    for s in g.symbols:
        if s not in alphabet:
            raise UnknownSymbolError(s, 'regular expression alphabet')

    n = len(g.symbols)
    trans = {(0, g.symbols[p], p + 1) for p in first}
    for p in range(n):
        trans |= {(p + 1, g.symbols[q], q + 1) for q in g.follow[p]}
    final = {p + 1 for p in last} | ({0} if nullable else set())
    return Nfa(tuple(range(n + 1)), alphabet, frozenset(trans), {0}, frozenset(final))
