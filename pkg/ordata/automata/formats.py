"""
Sectioned text format for automata.

A file is a sequence of sections opened by a `[name args...]` header; '#' starts a
comment. Word automata are written as blocks of

    states: p q          (optional, inferred otherwise)
    alphabet: ...        (optional, inferred otherwise)
    init: p
    final: q
    p -> symbol -> q

or, for horizontal languages, a single `regex: <expression over states>` line. Tree
automata use the sections [alphabet], [states], [final] and one
[horiz q label...] block per horizontal language shared by the listed labels. Profiled
input labels are written `a:l p r` without spaces (`a:*=!`); `?` in a profile position
expands to all three relations.
"""
import re
from dataclasses import dataclass, field

from ordata.automata.nfa import Nfa, PredicateNfa
from ordata.automata.regex import compile_regex
from ordata.automata.tree_automaton import UnrankedTreeAutomaton
from ordata.common.errors import OrdataError, ParseError
from ordata.common.utils import canonical_sorted, render_symbol
from ordata.core.profiles import ALL_PROFILES, ProfileTriple, Rel

_header = re.compile(r'^\[\s*([A-Za-z0-9_-]+)((?:\s+\S+)*)\s*\]$')
_item = re.compile(r'\{[^}]*\}|\S+')


@dataclass
class Section(object):
    name: str
    args: list
    line: int
    lines: list = field(default_factory=list)

    def tokens(self):
        """ All whitespace separated items of the section body. """
        return [tok for _, text in self.lines for tok in items(text)]


def items(text):
    return _item.findall(text)


def read_sections(text):
    """ Splits a file into sections; body lines keep their 1-based line numbers. """
    sections = []
    for i, raw in enumerate(text.splitlines()):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        m = _header.match(line)
        if m:
            sections.append(Section(m.group(1).lower(), m.group(2).split(), i + 1))
        elif line.startswith('['):
            raise ParseError('malformed section header {!r}'.format(line), i + 1, 1)
        elif not sections:
            raise ParseError('content before the first section header', i + 1, 1)
        else:
            sections[-1].lines.append((i + 1, line))
    return sections


def sections_by_name(sections, unique=()):
    table = {}
    for s in sections:
        if s.name in unique and s.name in table:
            raise ParseError('section [{}] appears twice'.format(s.name), s.line, 1)
        table.setdefault(s.name, []).append(s)
    return table


def parse_set_symbol(token, line=None):
    """ `{a,b}` -> frozenset({'a', 'b'}) """
    if not (token.startswith('{') and token.endswith('}')):
        raise ParseError('expected a set symbol like {{a,b}}, found {!r}'.format(token), line)
    names = [p.strip() for p in token[1:-1].split(',') if p.strip()]
    if not names:
        raise ParseError('set symbols are nonempty', line)
    return frozenset(names)


def parse_input_label(token, profiled, line=None):
    """ Expands one input label token to the list of symbols it denotes. """
    if not profiled:
        return [token]
    base, sep, prof = token.rpartition(':')
    if not sep or not base or len(prof) != 3:
        raise ParseError('profiled label {!r} must look like a:*=!'.format(token), line)
    choices = []
    for ch in prof:
        if ch == '?':
            choices.append(list(Rel))
        else:
            try:
                choices.append([Rel(ch)])
            except ValueError:
                raise ParseError('profile {!r} uses characters other than = ! * ?'.format(prof), line)
    return [(base, p) for p in ALL_PROFILES if all(r in c for r, c in zip(p, choices))]


def render_label(lab):
    if isinstance(lab, tuple) and len(lab) == 2 and isinstance(lab[1], ProfileTriple):
        return '{}:{}'.format(render_symbol(lab[0]), lab[1])
    return render_symbol(lab)


def render_labels(labels, profiled):
    """ Renders a label group, folding complete profile sets into `a:???`. """
    if not profiled:
        return [render_label(lab) for lab in labels]
    out, by_base = [], {}
    for base, p in labels:
        by_base.setdefault(base, []).append(p)
    for base, profiles in by_base.items():
        if set(profiles) == set(ALL_PROFILES):
            out.append('{}:???'.format(render_symbol(base)))
        else:
            out += ['{}:{}'.format(render_symbol(base), p) for p in profiles]
    return out


def unique_names(things, what):
    names = {}
    for x in things:
        r = render_symbol(x)
        if r in names and names[r] != x:
            raise OrdataError('{} {!r} and {!r} render to the same name {}'.format(what, names[r], x, r))
        names[r] = x
    return {v: k for k, v in names.items()}


def parse_nfa_block(section, parse_symbol=None, alphabet=None):
    """
    Reads a word automaton block.

    Parameters
    ----------
    section: Section
        the block
    parse_symbol: callable
        maps a symbol token (and its line) to a symbol
    alphabet: tuple
        fixed alphabet, e.g. the states of the enclosing tree automaton
    """
    if parse_symbol is None:
        def parse_symbol(token, line):
            return token

    states, declared_alphabet, init, final, trans = [], None, None, None, []
    regex = None
    for line, text in section.lines:
        if text.startswith('regex:'):
            regex = (line, text[len('regex:'):])
            continue
        if '->' in text:
            parts = [p.strip() for p in text.split('->')]
            if len(parts) != 3 or not all(parts):
                raise ParseError('transition must read `p -> symbol -> q`', line, 1)
            trans.append((parts[0], parse_symbol(parts[1], line), parts[2]))
            continue
        key, sep, rest = text.partition(':')
        if not sep:
            raise ParseError('unexpected line {!r} in [{}]'.format(text, section.name), line, 1)
        key = key.strip()
        values = items(rest)
        if key == 'states':
            states = values
        elif key == 'alphabet':
            declared_alphabet = [parse_symbol(v, line) for v in values]
        elif key == 'init':
            init = values
        elif key == 'final':
            final = values
        else:
            raise ParseError('unknown key {!r} in [{}]'.format(key, section.name), line, 1)

    if regex is not None:
        if trans or init is not None or final is not None:
            raise ParseError('a regex block takes no other lines', regex[0], 1)
        try:
            return compile_regex(regex[1], alphabet)
        except ParseError as e:
            raise ParseError(e.reason, regex[0], e.column)

    if init is None:
        raise ParseError('[{}] needs an init: line'.format(section.name), section.line, 1)
    final = final or []
    if not states:
        states = list(dict.fromkeys(init + final + [x for p, _, q in trans for x in (p, q)]))
    if alphabet is None:
        alphabet = declared_alphabet if declared_alphabet is not None else \
            canonical_sorted(dict.fromkeys(a for _, a, _ in trans))
    try:
        return Nfa(tuple(states), tuple(alphabet), frozenset(trans), frozenset(init), frozenset(final))
    except OrdataError as e:
        raise ParseError(e.message, section.line, 1)


def render_nfa_block(m, render=render_symbol, with_alphabet=True):
    if isinstance(m, PredicateNfa):
        raise OrdataError('symbolic automaton {} has no explicit form'.format(m.description))
    names = unique_names(m.states, 'states')
    lines = ['states: ' + ' '.join(names[q] for q in m.states)]
    if with_alphabet:
        lines.append('alphabet: ' + ' '.join(render(a) for a in m.alphabet))
    lines.append('init: ' + ' '.join(names[q] for q in canonical_sorted(m.initial)))
    lines.append('final: ' + ' '.join(names[q] for q in canonical_sorted(m.final)))
    for p, a, q in canonical_sorted(m.transitions):
        lines.append('{} -> {} -> {}'.format(names[p], render(a), names[q]))
    return lines


def parse_tree_automaton(table, profiled=False, prefix=''):
    """ Builds the tree automaton of the [alphabet], [states], [final] and [horiz] sections. """
    def one(name):
        found = table.get(prefix + name)
        if not found:
            raise ParseError('missing section [{}]'.format(prefix + name))
        return found[0]

    sigma = one('alphabet').tokens()
    states = one('states').tokens()
    final = one('final').tokens()
    if profiled:
        alphabet = tuple((a, p) for a in sigma for p in ALL_PROFILES)
    else:
        alphabet = tuple(parse_symbol_token(a) for a in sigma)

    horizontal = {}
    for s in table.get(prefix + 'horiz', []):
        if len(s.args) < 2:
            raise ParseError('[{}horiz] needs a state and at least one label'.format(prefix), s.line, 1)
        q, labels = s.args[0], s.args[1:]
        h = parse_nfa_block(s, alphabet=tuple(states))
        for token in labels:
            for lab in parse_input_label(parse_symbol_token(token), profiled, s.line):
                if (q, lab) in horizontal:
                    raise ParseError('horizontal language of ({}, {}) given twice'.format(q, token), s.line, 1)
                horizontal[(q, lab)] = h
    try:
        return UnrankedTreeAutomaton(tuple(states), alphabet, tuple(horizontal.items()), frozenset(final))
    except OrdataError as e:
        raise ParseError(e.message)


def parse_symbol_token(token):
    """ Tokens of the ROOT / set symbol kinds stay structured, the rest are names. """
    if token.startswith('{'):
        return parse_set_symbol(token)
    return token


def render_tree_automaton(a, profiled=False, prefix=''):
    names = unique_names(a.states, 'states')
    sigma = tuple(dict.fromkeys(lab[0] for lab in a.alphabet)) if profiled else a.alphabet
    lines = ['[{}alphabet]'.format(prefix), ' '.join(render_symbol(s) for s in sigma),
             '[{}states]'.format(prefix), ' '.join(names[q] for q in a.states),
             '[{}final]'.format(prefix), ' '.join(names[q] for q in canonical_sorted(a.final))]

    groups = {}
    for (q, lab), h in a.horizontal:
        groups.setdefault((q, id(h)), (h, []))[1].append(lab)
    for (q, _), (h, labels) in groups.items():
        lines.append('[{}horiz {} {}]'.format(prefix, names[q], ' '.join(render_labels(labels, profiled))))
        lines += render_nfa_block(h, render=lambda r: names[r], with_alphabet=False)
    return lines


def parse_automaton(text):
    """ Reads a plain unranked tree automaton file. """
    table = sections_by_name(read_sections(text), unique=('alphabet', 'states', 'final'))
    return parse_tree_automaton(table)


def serialize_automaton(a):
    return '\n'.join(render_tree_automaton(a)) + '\n'
