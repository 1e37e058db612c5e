import itertools

import numpy as np
import pytest

from ordata.automata.nfa import Nfa
from ordata.automata.tree_automaton import all_trees_automaton, ta_enumerate
from ordata.cli.generate import random_nfa, random_tree
from ordata.common.errors import NotATextError, OrdataError, ParseError, UnknownSymbolError
from ordata.core.trees import OrderedDataTree
from ordata.core.values import value_classes
from ordata.frontends.constraints import Compl, Inclusion, Inter, Key, SetConstraint, Union, Var, \
    canonical_sorted_constraints, evaluate_term, render_constraints, satisfies, satisfies_all, sterm_family
from ordata.frontends.dtd import Dtd, conforms, dtd_automaton, dtd_sat, dtd_to_weak_odta, inclusion_orderings
from ordata.frontends.formats import parse_constraints, parse_dtd, parse_term
from ordata.frontends.setlinear import set_constraint_automaton, setlinear_to_odta
from ordata.frontends.text import TextAutomaton, WordTransducer, msp, simulate_text_automaton, \
    text_automaton_to_weak_odta, tree_word, word_tree
from ordata.odta import EMPTY, NONEMPTY, EmptinessCaps, empty, member
from ordata.odta.brute_force import rank_assignments

fs = frozenset

LIST_DTD = """
# a list of items followed by one note
root: doc
doc -> item+ note
item -> ~
note -> ~
"""

PAIR_DTD = """
doc -> item item note
"""


def test_parse_dtd():
    d = parse_dtd(LIST_DTD)
    assert d.root == 'doc'
    assert set(d.alphabet) == {'doc', 'item', 'note'}
    ok = OrderedDataTree.from_nested(('doc', 1, [('item', 1, []), ('item', 2, []), ('note', 3, [])]))
    bad = OrderedDataTree.from_nested(('doc', 1, [('note', 3, [])]))
    assert conforms(d, ok) and not conforms(d, bad)


def test_parse_dtd_defaults_root_to_first_rule():
    d = parse_dtd(PAIR_DTD)
    assert d.root == 'doc'
    # labels without a rule only occur as leaves
    assert not conforms(d, OrderedDataTree.from_nested(('doc', 1, [('item', 1, [('item', 1, [])]),
                                                                   ('item', 1, []), ('note', 1, [])])))


@pytest.mark.parametrize('text, line', [
    ('doc -> item\ndoc -> note', 2),
    ('doc -> (item', 1),
    ('root: doc\nroot: doc\ndoc -> ~', 2),
    ('doc item', 1),
])
def test_parse_dtd_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_dtd(text)
    assert e.value.line == line


def test_dtd_sat_with_keys_and_inclusions():
    d = parse_dtd(LIST_DTD)
    constraints = [Key('item'), Inclusion('item', 'note')]
    verdict = dtd_sat(d, constraints)
    assert verdict.is_sat
    assert conforms(d, verdict.witness) and satisfies_all(constraints, verdict.witness)


def test_dtd_unsat():
    d = parse_dtd(PAIR_DTD)
    verdict = dtd_sat(d, [Key('item'), Inclusion('item', 'note')])
    assert verdict.status == 'unsat'
    assert verdict.report['guesses'] >= 1
    # without the key both items may share the note's value
    assert dtd_sat(d, [Inclusion('item', 'note')]).is_sat


def test_dtd_to_weak_odta():
    d = parse_dtd(PAIR_DTD)
    s = dtd_to_weak_odta(d, [Key('item')])
    assert empty(s).kind == NONEMPTY
    t = OrderedDataTree.from_nested(('doc', 1, [('item', 1, []), ('item', 1, []), ('note', 1, [])]))
    assert member(s, t) is False
    assert member(s, t.with_values((1, 1, 2, 1))) is True


def test_dtd_constraint_labels_are_checked():
    with pytest.raises(UnknownSymbolError):
        dtd_sat(parse_dtd(PAIR_DTD), [Key('zzz')])


def test_inclusion_orderings_respect_inclusions():
    inclusions = [('a', 'b'), ('b', 'c')]
    seen = list(inclusion_orderings(('a', 'b', 'c'), inclusions))
    assert seen
    for used, hs in seen:
        assert fs().union(*hs) == used
        index = {x: i for i, h in enumerate(hs) for x in h}
        for a, b in inclusions:
            if a in used:
                assert b in used and index[a] <= index[b]


def test_parse_constraints_round_trip():
    text = """
    key(a)
    incl(a, b)   # V(a) is part of V(b)
    set: V(a) & !(V(b) | V(c)) = empty
    set: V(c) != empty
    lin: x_a + 2*x_{a,b} >= 3
    """
    constraints = parse_constraints(text)
    assert constraints[0] == Key('a') and constraints[1] == Inclusion('a', 'b')
    assert constraints[2] == SetConstraint(Inter(Var('a'), Compl(Union(Var('b'), Var('c')))), False)
    again = parse_constraints(render_constraints(constraints))
    assert canonical_sorted_constraints(again) == canonical_sorted_constraints(constraints)


@pytest.mark.parametrize('text, line', [
    ('key(a', 1),
    ('key(a)\nset: V(a) & = empty', 2),
    ('set: V(a) ? V(b) != empty', 1),
    ('key(a)\n\nlin: x_a', 3),
])
def test_parse_constraints_errors(text, line):
    with pytest.raises(ParseError) as e:
        parse_constraints(text)
    assert e.value.line == line


def test_sterm_family():
    sigma = ('a', 'b')
    assert sterm_family(Var('a'), sigma) == {fs('a'), fs('ab')}
    assert sterm_family(parse_term('V(a) & !(V(b))'), sigma) == {fs('a')}
    assert sterm_family(parse_term('!(V(a)) | V(b)'), sigma) == {fs('b'), fs('ab')}
    assert sterm_family(parse_term('V(a) & !(V(a))'), sigma) == frozenset()


def test_term_evaluation(profile_tree):
    assert evaluate_term(parse_term('V(a) & !(V(b))'), profile_tree) == {6}
    assert evaluate_term(parse_term('V(b) | V(c)'), profile_tree) == {1, 2, 4, 6, 7}


def test_term_family_matches_evaluation():
    sigma = ('a', 'b', 'c')
    terms = ['V(a) & !(V(b))', '!(V(a) | V(c))', 'V(b) & V(c) | !(V(a))', 'V(a)']
    rs = np.random.RandomState(7)
    for _ in range(30):
        t = random_tree(rs, int(rs.randint(1, 7)), sigma=sigma, max_value=4)
        classes = value_classes(t)
        for text in terms:
            term = parse_term(text)
            family = sterm_family(term, sigma)
            expected = fs().union(*[vs for s, vs in classes.items() if s in family])
            assert evaluate_term(term, t) == expected, text


def test_satisfies():
    t = OrderedDataTree.from_nested(('a', 1, [('b', 1, []), ('a', 2, []), ('b', 2, [])]))
    assert satisfies(Key('b'), t)
    assert satisfies(Inclusion('a', 'b'), t)
    assert not satisfies(Key('a'), t.with_values((1, 1, 1, 2)))
    assert not satisfies(Inclusion('b', 'a'), t.with_values((1, 3, 2, 2)))
    assert satisfies(SetConstraint(parse_term('V(a) & !(V(b))'), False), t)


def test_set_constraint_automaton():
    m = set_constraint_automaton(('a', 'b'), [SetConstraint(Var('a'), True), SetConstraint(Var('b'), False)])
    assert set(m.alphabet) == {fs('a')}
    assert len(m.final) == 1


def test_setlinear_nonempty():
    a = all_trees_automaton(('a', 'b'))
    constraints = parse_constraints('set: V(a) & V(b) != empty\nlin: x_a >= 2\nlin: z_{a,b} >= 2')
    s = setlinear_to_odta(a, constraints)
    verdict = empty(s)
    assert verdict.kind == NONEMPTY
    assert satisfies_all(constraints, verdict.witness)
    assert len(value_classes(verdict.witness)[fs('ab')]) >= 2


def test_setlinear_empty():
    a = all_trees_automaton(('a', 'b'))
    constraints = parse_constraints('set: V(a) = empty\nlin: x_a >= 1')
    assert empty(setlinear_to_odta(a, constraints)).kind == EMPTY


def test_setlinear_rejects_keys():
    with pytest.raises(OrdataError):
        setlinear_to_odta(all_trees_automaton(('a',)), [Key('a')])


def first_value_rises():
    """ Texts where the position holding value 1 is followed by value 2. """
    sigma = ('a', 'b')
    inputs = tuple((a, m) for a in sigma for m in (-1, 1, '*'))
    trans = frozenset(('p', (a, m), 'x' if m == 1 else 'y', 'p') for a, m in inputs)
    t1 = WordTransducer(('p',), inputs, ('x', 'y'), trans, {'p'}, {'p'})
    t2 = Nfa((0, 1), ('x', 'y'), frozenset([(0, 'x', 1), (1, 'x', 1), (1, 'y', 1)]), {0}, {1})
    return TextAutomaton(t1, t2)


def texts(max_len, sigma=('a', 'b')):
    for n in range(1, max_len + 1):
        for labels in itertools.product(sigma, repeat=n):
            for values in itertools.permutations(range(1, n + 1)):
                yield list(zip(labels, values))


def test_msp():
    assert msp([('a', 1), ('b', 2), ('a', 3)]) == (('a', 1), ('b', 1), ('a', '*'))
    assert msp([('a', 3), ('b', 2), ('a', 1)]) == (('a', -1), ('b', -1), ('a', '*'))
    assert msp([('a', 2), ('b', 4), ('a', 1), ('b', 3)]) == (('a', '*'), ('b', '*'), ('a', '*'), ('b', '*'))


@pytest.mark.parametrize('word', [[], [('a', 1), ('b', 1)], [('a', 1), ('b', 3)], [('a', 0)]])
def test_msp_rejects_non_texts(word):
    with pytest.raises(NotATextError) as e:
        msp(word)
    assert e.value.kind == 'NOT_A_TEXT'


def test_simulate_text_automaton():
    ta = first_value_rises()
    assert simulate_text_automaton(ta, [('a', 1), ('b', 2)])
    assert not simulate_text_automaton(ta, [('a', 2), ('b', 1)])
    assert not simulate_text_automaton(ta, [('a', 1)])
    assert simulate_text_automaton(ta, [('b', 3), ('a', 1), ('a', 2)])


def test_word_tree_conversion():
    word = [('a', 2), ('b', 1), ('a', 3)]
    t = word_tree(word)
    assert t.children == ((1,), (2,), ())
    assert tree_word(t) == word
    with pytest.raises(OrdataError):
        tree_word(OrderedDataTree.from_nested(('a', 1, [('b', 2, []), ('b', 3, [])])))


def test_text_reduction_accepts_accepted_texts():
    ta = first_value_rises()
    s = text_automaton_to_weak_odta(ta)
    for word in texts(3):
        if simulate_text_automaton(ta, word):
            assert member(s, word_tree(word)) is True, word


def test_text_reduction_is_projection_complete():
    ta = first_value_rises()
    s = text_automaton_to_weak_odta(ta)
    accepted_projections = {tuple(a for a, _ in w) for w in texts(3) if simulate_text_automaton(ta, w)}
    for word in texts(3):
        if member(s, word_tree(word)) is True:
            assert tuple(a for a, _ in word) in accepted_projections, word


def test_text_reduction_rejects_repeated_values():
    s = text_automaton_to_weak_odta(first_value_rises())
    assert member(s, word_tree([('a', 1), ('b', 1)])) is False


def test_text_reduction_emptiness():
    s = text_automaton_to_weak_odta(first_value_rises())
    verdict = empty(s, EmptinessCaps())
    assert verdict.kind == NONEMPTY
    word = tree_word(verdict.witness)
    assert len(word) >= 2


def random_dtd(rs):
    """ r over a random word language of a and b, a over a random language of b, b a leaf. """
    productions = {'r': random_nfa(rs, ('a', 'b'), n_states=int(rs.randint(1, 3)), density=0.4, name='r'),
                   'a': random_nfa(rs, ('b',), n_states=int(rs.randint(1, 3)), density=0.4, name='a')}
    return Dtd(('r', 'a', 'b'), 'r', productions)


def random_constraints(rs, sigma=('r', 'a', 'b')):
    constraints = [Key(a) for a in sigma if rs.rand() < 0.3]
    for a, b in itertools.permutations(sigma, 2):
        if rs.rand() < 0.2:
            constraints.append(Inclusion(a, b))
    return constraints


def satisfying_tree(d, constraints, max_nodes):
    for shape, _ in ta_enumerate(dtd_automaton(d), max_nodes):
        for values in rank_assignments(len(shape), max_nodes):
            t = OrderedDataTree(shape.labels, shape.children, values)
            if satisfies_all(constraints, t):
                return t
    return None


@pytest.mark.slow
def test_dtd_sat_against_brute_force():
    rs = np.random.RandomState(20)
    statuses = set()
    for _ in range(100):
        d = random_dtd(rs)
        constraints = random_constraints(rs)
        verdict = dtd_sat(d, constraints)
        statuses.add(verdict.status)
        found = satisfying_tree(d, constraints, 5)
        if verdict.is_sat:
            assert conforms(d, verdict.witness) and satisfies_all(constraints, verdict.witness)
        elif verdict.status == 'unsat':
            assert found is None, render_constraints(constraints)
        if found is not None:
            assert verdict.status != 'unsat'
    assert 'sat' in statuses
