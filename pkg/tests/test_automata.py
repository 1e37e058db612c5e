import itertools
import re

import numpy as np
import pytest

from ordata.automata.apc import Apc, apc_solve
from ordata.automata.formats import parse_automaton, serialize_automaton
from ordata.automata.nfa import CountingNfa, Nfa, nfa_empty, nfa_intersection, nfa_member, nfa_shortest_word, \
    nfa_union, words_up_to
from ordata.automata.periodic import PeriodicLanguageUnion, periodic_contains
from ordata.automata.profile_automaton import profile_consistency_automaton
from ordata.automata.regex import compile_regex
from ordata.automata.transducer import TreeTransducer, identity_transducer, transducer_apply
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, all_trees_automaton, check_run, \
    empty_tree_automaton, ta_accepts, ta_empty, ta_enumerate, ta_product_intersection, ta_product_union, ta_run
from ordata.cli.generate import random_shape
from ordata.common.errors import AlphabetMismatchError, DimensionMismatchError, OrdataError, ParseError, \
    UnknownSymbolError
from ordata.core.profiles import DIFF, SAME, ProfileTriple, is_consistent_profile_tree, profile
from ordata.core.trees import LabeledTree, OrderedDataTree
from ordata.presburger.formula import aux, conj, eq, ge, sym
from ordata.presburger.solver import SAT, UNSAT


def a_star_b():
    return Nfa(('p', 'q'), ('a', 'b'), {('p', 'a', 'p'), ('p', 'b', 'q')}, {'p'}, {'q'})


def parity_automaton():
    """ Trees with an even number of a-nodes; a node's state is the parity of its subtree. """
    def h(final):
        trans = {(0, 'e', 0), (0, 'o', 1), (1, 'e', 1), (1, 'o', 0)}
        return Nfa((0, 1), ('e', 'o'), trans, {0}, {final})
    odd_kids, even_kids = h(1), h(0)
    horizontal = {('e', 'a'): odd_kids, ('o', 'a'): even_kids, ('e', 'b'): even_kids, ('o', 'b'): odd_kids}
    return UnrankedTreeAutomaton(('e', 'o'), ('a', 'b'), horizontal, {'e'})


def root_b_automaton():
    anything = Nfa(('h',), ('s',), {('h', 's', 'h')}, {'h'}, {'h'})
    horizontal = {('r', 'b'): anything, ('s', 'a'): anything, ('s', 'b'): anything}
    return UnrankedTreeAutomaton(('r', 's'), ('a', 'b'), horizontal, {'r'})


def sample_shapes(n=60, seed=0, sigma=('a', 'b')):
    rs = np.random.RandomState(seed)
    return [random_shape(rs, int(rs.randint(1, 7)), sigma) for _ in range(n)]


def test_nfa_member():
    m = a_star_b()
    assert nfa_member(m, 'aab')
    assert not nfa_member(m, '')
    assert not nfa_member(m, 'aba')
    with pytest.raises(UnknownSymbolError):
        nfa_member(m, 'ac')


def test_nfa_emptiness():
    assert not nfa_empty(a_star_b())
    assert nfa_empty(Nfa(('p',), ('a',), {('p', 'a', 'p')}, {'p'}, ()))
    assert nfa_shortest_word(a_star_b()) == ('b',)


def test_nfa_union_and_intersection():
    m = a_star_b()
    only_b = Nfa((0, 1), ('b',), {(0, 'b', 1)}, {0}, {1})
    union, inter = nfa_union(m, only_b), nfa_intersection(m, only_b)
    for w in ['b', 'ab', 'aab', '', 'bb']:
        assert nfa_member(union, w) == (nfa_member(m, w) or w == 'b')
    assert words_up_to(inter, 4) == [('b',)]


@pytest.mark.parametrize('expr', ['a* b', 'a (b | c)*', '(a b)+ c?', 'a | b c | (c c)*', 'a? b? c?'])
def test_regex_agrees_with_re(expr):
    m = compile_regex(expr, ('a', 'b', 'c'))
    pattern = re.compile(expr.replace(' ', ''))
    for n in range(5):
        for w in itertools.product('abc', repeat=n):
            assert nfa_member(m, w) == bool(pattern.fullmatch(''.join(w))), ''.join(w)


def test_regex_epsilon():
    for expr in ['', '~']:
        m = compile_regex(expr, ('a',))
        assert words_up_to(m, 3) == [()]


def test_regex_multichar_names():
    m = compile_regex('item+ note?')
    assert m.alphabet == ('item', 'note')
    assert nfa_member(m, ('item', 'item', 'note'))
    assert not nfa_member(m, ('note',))


@pytest.mark.parametrize('expr', ['(a', 'a |* b', 'a $', ')'])
def test_regex_syntax_errors(expr):
    with pytest.raises(ParseError):
        compile_regex(expr)


def test_regex_unknown_symbol():
    with pytest.raises(UnknownSymbolError):
        compile_regex('a c', ('a', 'b'))


def test_parity_run():
    a = parity_automaton()
    three = LabeledTree.from_nested(('a', [('a', []), ('a', [])]))
    two = LabeledTree.from_nested(('a', [('b', []), ('a', [])]))
    assert ta_run(a, three) is None
    run = ta_run(a, two)
    assert run is not None and check_run(a, two, run)


def test_parity_against_count():
    a = parity_automaton()
    for t in sample_shapes():
        run = ta_run(a, t)
        even = t.labels.count('a') % 2 == 0
        assert (run is not None) == even
        if run is not None:
            assert check_run(a, t, run)


def test_leaf_run():
    a = all_trees_automaton(('a',))
    assert ta_run(a, LabeledTree(('a',), ((),))) == ('q',)
    with pytest.raises(UnknownSymbolError):
        ta_run(a, LabeledTree(('b',), ((),)))


def test_ta_enumerate_counts_ordered_trees():
    trees = list(ta_enumerate(all_trees_automaton(('a',)), 4))
    # 1, 1, 2 and 5 ordered trees with 1..4 nodes
    assert len(trees) == 9
    assert [len(t) for t, _ in trees] == sorted(len(t) for t, _ in trees)


def test_ta_emptiness():
    assert ta_empty(empty_tree_automaton(('a',)))
    assert not ta_empty(parity_automaton())


def test_products_agree_pointwise():
    p, r = parity_automaton(), root_b_automaton()
    union, inter = ta_product_union(p, r), ta_product_intersection(p, r)
    for t in sample_shapes():
        assert ta_accepts(union, t) == (ta_accepts(p, t) or ta_accepts(r, t))
        assert ta_accepts(inter, t) == (ta_accepts(p, t) and ta_accepts(r, t))


def test_products_with_neutral_elements():
    p = parity_automaton()
    full, none = all_trees_automaton(('a', 'b')), empty_tree_automaton(('a', 'b'))
    for t in sample_shapes(30, seed=1):
        assert ta_accepts(ta_product_intersection(full, p), t) == ta_accepts(p, t)
        assert ta_accepts(ta_product_union(none, p), t) == ta_accepts(p, t)


def test_product_alphabet_mismatch():
    with pytest.raises(AlphabetMismatchError):
        ta_product_union(parity_automaton(), all_trees_automaton(('a',)))


def test_identity_transducer_outputs_input():
    t = LabeledTree.from_nested(('a', [('b', []), ('a', [])]))
    outs = list(transducer_apply(identity_transducer(all_trees_automaton(('a', 'b'))), t))
    assert outs == [t]


def test_transducer_output_product():
    tr = TreeTransducer(all_trees_automaton(('a',)), ('x', 'y'), {('q', 'a', 'x'), ('q', 'a', 'y')})
    t = LabeledTree.from_nested(('a', [('a', [])]))
    outs = list(transducer_apply(tr, t))
    assert sorted(o.labels for o in outs) == [('x', 'x'), ('x', 'y'), ('y', 'x'), ('y', 'y')]


def test_transducer_keeps_values_and_budget():
    tr = TreeTransducer(all_trees_automaton(('a',)), ('x', 'y'), {('q', 'a', 'x'), ('q', 'a', 'y')})
    t = OrderedDataTree(('a', 'a'), ((1,), ()), (3, 4))
    handle = transducer_apply(tr, t, budget=2)
    outs = list(handle)
    assert len(outs) == 2 and handle.truncated
    assert all(o.values == (3, 4) for o in outs)


def test_transducer_on_rejected_tree():
    tr = identity_transducer(parity_automaton())
    t = LabeledTree.from_nested(('a', []))
    assert list(transducer_apply(tr, t)) == []


def test_periodic_contains():
    p = PeriodicLanguageUnion(('a', 'b'), [((1, 0), ((2, 0), (0, 3)))])
    assert periodic_contains(p, (5, 3))
    assert periodic_contains(p, (1, 0))
    assert not periodic_contains(p, (0, 0))
    assert not periodic_contains(p, (2, 3))
    with pytest.raises(DimensionMismatchError):
        periodic_contains(p, (1, 0, 0))


def test_periodic_rejects_non_base():
    with pytest.raises(OrdataError):
        PeriodicLanguageUnion(('a', 'b'), [((0, 0), ((1, 1), (0, 1)))])


def test_periodic_against_enumeration():
    p = PeriodicLanguageUnion(('a', 'b'), [((1, 2), ((3, 0), (0, 2))), ((0, 5), ((0, 0), (0, 1)))])
    members = set()
    for tup in p.tuples:
        base, periods = tup
        for h in itertools.product(range(8), repeat=2):
            members.add(tuple(base[i] + h[i] * periods[i][i] for i in range(2)))
    for v in itertools.product(range(10), repeat=2):
        assert periodic_contains(p, v) == (v in members)


def test_profile_consistency(profile_tree):
    pt = profile(profile_tree)
    pa = profile_consistency_automaton(set(pt.labels))
    assert ta_accepts(pa, pt)

    labels = list(pt.labels)
    labels[10] = ('a', ProfileTriple(DIFF, DIFF, DIFF))
    broken = LabeledTree(tuple(labels), pt.children)
    pa = profile_consistency_automaton(set(labels))
    assert not ta_accepts(pa, broken)
    assert not is_consistent_profile_tree(broken)


def test_profile_triangle_rule():
    t = OrderedDataTree(('a', 'b', 'b'), ((1, 2), (), ()), (1, 1, 2))
    pt = profile(t)
    labels = [pt.labels[0], ('b', ProfileTriple.parse('*==')), ('b', ProfileTriple.parse('=!*'))]
    bad = LabeledTree(tuple(labels), pt.children)
    assert ta_accepts(profile_consistency_automaton(set(pt.labels)), pt)
    assert not ta_accepts(profile_consistency_automaton(set(labels)), bad)
    assert pt.labels[1][1].parent == SAME


def test_apc_solve():
    a = all_trees_automaton(('a', 'b'))
    result, (tree, run) = apc_solve(Apc(a, ge({sym('a'): 1}, 2)))
    assert result.status is SAT
    assert tree.labels.count('a') >= 2 and check_run(a, tree, run)

    result, found = apc_solve(Apc(root_b_automaton(), ge({sym('b'): -1}, 0)))
    assert result.status is UNSAT and found is None


def test_apc_counts_marked_transitions():
    kids = aux('kids')
    marked = CountingNfa(('h',), ('s',), {('h', 's', 'h')}, {'h'}, {'h'}, marks=((('h', 's', 'h'), kids),))
    leaf = Nfa(('l',), ('s',), frozenset(), {'l'}, {'l'})
    a = UnrankedTreeAutomaton(('r', 's'), ('a', 'b'), {('r', 'b'): marked, ('s', 'a'): leaf}, {'r'})
    assert kids in Apc(a, ge({kids: 1}, 0)).count_keys()

    result, (tree, run) = apc_solve(Apc(a, ge({kids: 1}, 3)))
    assert result.status is SAT
    assert len(tree.children[0]) >= 3 and check_run(a, tree, run)

    result, found = apc_solve(Apc(a, conj(eq({kids: 1}, 2), eq({sym('a'): 1}, 3))))
    assert result.status is UNSAT and found is None


def test_counting_nfa_marks_declared_transitions():
    with pytest.raises(OrdataError):
        CountingNfa(('h',), ('s',), {('h', 's', 'h')}, {'h'}, {'h'}, marks=((('h', 't', 'h'), aux('x')),))


def test_apc_undeclared_key():
    with pytest.raises(OrdataError):
        Apc(all_trees_automaton(('a',)), ge({sym('z'): 1}, 1))


def test_automaton_format_round_trip():
    text = serialize_automaton(parity_automaton())
    again = parse_automaton(text)
    assert serialize_automaton(again) == text
    for t in sample_shapes(20, seed=2):
        assert ta_accepts(again, t) == ta_accepts(parity_automaton(), t)


def test_automaton_format_regex_block():
    text = """
    [alphabet]
    list item
    [states]
    l i
    [final]
    l
    [horiz l list]
    regex: i*
    [horiz i item]
    regex: ~
    """
    a = parse_automaton(text)
    ok = LabeledTree.from_nested(('list', [('item', []), ('item', [])]))
    bad = LabeledTree.from_nested(('list', [('list', [])]))
    assert ta_accepts(a, ok) and not ta_accepts(a, bad)


@pytest.mark.parametrize('text', [
    'a -> b',
    '[alphabet]\na\n[states]\nq\n',
    '[alphabet]\na\n[states]\nq\n[final]\nq\n[horiz q a]\nq -> q\n',
    '[alphabet]\na\n[alphabet]\nb\n',
])
def test_automaton_format_errors(text):
    with pytest.raises(ParseError):
        parse_automaton(text)
