"""
Text formats for DTDs and constraints.

DTD files hold one `label -> regular expression` rule per line, optionally preceded
by `root: label`. Constraint files hold one constraint per line:

    key(a)
    incl(a, b)
    set: V(a) & !(V(b)) != empty
    lin: x_a >= z_{a,b} + 1

'#' starts a comment in both formats.
"""
import re

from ordata.automata.regex import compile_regex
from ordata.common.errors import ParseError
from ordata.frontends.constraints import Compl, Inclusion, Inter, Key, LinearConstraint, SetConstraint, Union, Var
from ordata.frontends.dtd import Dtd
from ordata.presburger.syntax import parse_linear_atom

_rule = re.compile(r'^\s*([A-Za-z0-9_.]+)\s*->\s*(.*)$')
_key = re.compile(r'^key\(\s*([A-Za-z0-9_.]+)\s*\)$')
_incl = re.compile(r'^incl\(\s*([A-Za-z0-9_.]+)\s*,\s*([A-Za-z0-9_.]+)\s*\)$')
_set = re.compile(r'^set:\s*(.*?)\s*(!=|=)\s*empty$')
_term_token = re.compile(r'\s*(?:(?P<var>V\(\s*[A-Za-z0-9_.]+\s*\))|(?P<op>[&|!()])|(?P<bad>\S))')


def _lines(text):
    for i, raw in enumerate(text.splitlines()):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield i + 1, line


def parse_dtd(text):
    root, rules = None, []
    for n, line in _lines(text):
        if line.startswith('root:'):
            if root is not None:
                raise ParseError('root declared twice', n)
            root = line[len('root:'):].strip()
            continue
        m = _rule.match(line)
        if m is None:
            raise ParseError('expected `label -> regex`', n)
        if any(a == m.group(1) for a, _ in rules):
            raise ParseError('second rule for {}'.format(m.group(1)), n)
        try:
            compile_regex(m.group(2))
        except ParseError as e:
            raise ParseError('content model of {}: {}'.format(m.group(1), e.reason), n, e.column)
        rules.append((m.group(1), m.group(2)))
    if not rules:
        raise ParseError('a DTD needs at least one rule')
    return Dtd.from_rules(rules, root)


class _TermParser(object):
    """ term := conj ('|' conj)*, conj := unary ('&' unary)*, unary := '!' unary | atom """

    def __init__(self, text, line):
        self.line = line
        self.tokens = []
        pos = 0
        while pos < len(text) and text[pos:].strip():
            m = _term_token.match(text, pos)
            if m.lastgroup == 'bad':
                raise ParseError('unexpected {!r} in set term'.format(m.group('bad')), line, m.start('bad') + 1)
            self.tokens.append(m.group(m.lastgroup))
            pos = m.end()
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError('expected {} in set term'.format(expected or 'a term'), self.line)
        self.pos += 1
        return tok

    def parse(self):
        term = self.union()
        if self.peek() is not None:
            raise ParseError('trailing {!r} in set term'.format(self.peek()), self.line)
        return term

    def union(self):
        term = self.inter()
        while self.peek() == '|':
            self.take()
            term = Union(term, self.inter())
        return term

    def inter(self):
        term = self.unary()
        while self.peek() == '&':
            self.take()
            term = Inter(term, self.unary())
        return term

    def unary(self):
        tok = self.take()
        if tok == '!':
            return Compl(self.unary())
        if tok == '(':
            term = self.union()
            self.take(')')
            return term
        if tok.startswith('V('):
            return Var(tok[2:-1].strip())
        raise ParseError('unexpected {!r} in set term'.format(tok), self.line)


def parse_term(text, line=None):
    return _TermParser(text, line).parse()


def parse_constraints(text):
    constraints = []
    for n, line in _lines(text):
        m = _key.match(line)
        if m:
            constraints.append(Key(m.group(1)))
            continue
        m = _incl.match(line)
        if m:
            constraints.append(Inclusion(m.group(1), m.group(2)))
            continue
        m = _set.match(line)
        if m:
            constraints.append(SetConstraint(parse_term(m.group(1), n), m.group(2) == '!='))
            continue
        if line.startswith('lin:'):
            try:
                constraints.append(LinearConstraint(parse_linear_atom(line[len('lin:'):])))
            except ParseError as e:
                raise ParseError(e.reason, n, e.column)
            continue
        raise ParseError('unknown constraint {!r}'.format(line), n)
    return constraints
