import numpy as np
import pytest

from ordata.automata.nfa import Nfa, nfa_member, star_automaton
from ordata.automata.transducer import identity_transducer, transducer_apply
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, all_trees_automaton
from ordata.cli.generate import random_odta, random_tree, random_weak_odta
from ordata.common.errors import OrdataError
from ordata.common.utils import nonempty_subsets
from ordata.core.profiles import profile
from ordata.core.trees import OrderedDataTree, StringDataTree
from ordata.core.values import ROOT, string_representation
from ordata.odta import UNKNOWN, ExtendedWeakODTA, StringWeakODTA, WeakODTA, lift_weak, member, odta_intersect, \
    odta_union, zonal_convert
from ordata.odta.formats import parse_bundle, serialize_bundle
from ordata.odta.fixtures import all_accepting, class_count_mod_weak, class_count_odta, class_count_weak, \
    increasing_chain, never_accepting, parent_differing_max_odta, swap_values, two_comparable_odta, \
    two_comparable_weak
from ordata.odta.membership import output_counts, weak_search
from ordata.presburger.formula import cls, eq, exists, ge, aux, sym

SIGMA = ('a', 'b', 'c')


def accepted_by_outputs(s, t):
    """ Membership read off the definition: some output with an accepted value word and distinct Γ₀ values. """
    inp = profile(t) if s.profiled else t.projection()
    for out in transducer_apply(s.transducer, inp, budget=10 ** 6):
        out = OrderedDataTree(out.labels, out.children, t.values)
        seen = set()
        distinct = True
        for b, v in zip(out.labels, out.values):
            if b in s.gamma0:
                distinct = distinct and (b, v) not in seen
                seen.add((b, v))
        if distinct and nfa_member(s.value_automaton, string_representation(out)):
            return True
    return False


def random_pairs(n, seed, sigma=('a', 'b'), max_size=5):
    rs = np.random.RandomState(seed)
    for _ in range(n):
        s = random_weak_odta(rs, n_states=int(rs.randint(1, 4)), sigma=sigma)
        t = random_tree(rs, int(rs.randint(1, max_size + 1)), sigma=sigma, max_value=3)
        yield s, t


def test_class_count_on_sample_tree(profile_tree):
    assert member(class_count_odta(SIGMA, 'ab', 2), profile_tree) is True
    assert member(class_count_odta(SIGMA, 'ab', 3), profile_tree) is False
    assert member(class_count_weak(SIGMA, 'abc', 1), profile_tree) is True
    assert member(class_count_mod_weak(SIGMA, 'ab', 2), profile_tree) is True


def test_fixed_automata(profile_tree):
    assert member(all_accepting(SIGMA), profile_tree) is True
    assert member(never_accepting(SIGMA), profile_tree) is False


def test_two_comparable(chain):
    s = two_comparable_odta()
    assert member(s, chain) is True
    assert member(s, increasing_chain(3)) is False
    assert member(s, swap_values(increasing_chain(3), 0, 2)) is True
    assert member(two_comparable_weak(), increasing_chain(3)) is False


def test_two_comparable_needs_two_nodes():
    single = OrderedDataTree(('a',), ((),), (1,))
    assert member(two_comparable_weak(), single) is False
    siblings = OrderedDataTree(('b', 'a', 'a'), ((1, 2), (), ()), (1, 2, 1))
    assert member(two_comparable_weak(), siblings) is False


def test_parent_differing_max():
    s = parent_differing_max_odta()
    assert member(s, OrderedDataTree(('a',), ((),), (9,))) is False
    assert member(s, OrderedDataTree.from_nested(('b', 1, [('a', 2, [])]))) is True
    assert member(s, OrderedDataTree.from_nested(('b', 2, [('a', 1, [])]))) is False
    # two differing a-children with the same value break distinctness
    twins = OrderedDataTree.from_nested(('b', 1, [('a', 2, []), ('a', 2, [])]))
    assert member(s, twins) is False


def test_unknown_on_tiny_budget(profile_tree):
    verdict = member(all_accepting(SIGMA), profile_tree, budget=1)
    assert verdict is UNKNOWN
    with pytest.raises(TypeError):
        bool(verdict)


def test_member_rejects_labeled_tree(profile_tree):
    with pytest.raises(OrdataError):
        member(all_accepting(SIGMA), profile_tree.projection())


def test_search_keeps_accepted_output(profile_tree):
    search = weak_search(class_count_weak(SIGMA, 'ab', 2), profile_tree)
    assert search.run() is True
    assert search.outputs.labels == profile_tree.labels
    assert search.outputs.values == profile_tree.values


def test_weak_membership_against_output_enumeration():
    for s, t in random_pairs(80, seed=11):
        assert member(s, t) is accepted_by_outputs(s, t)


@pytest.mark.slow
def test_weak_membership_on_larger_trees():
    verdicts = set()
    for s, t in random_pairs(200, seed=14, max_size=8):
        verdict = member(s, t)
        assert verdict is accepted_by_outputs(s, t)
        verdicts.add(verdict)
    assert verdicts == {True, False}


@pytest.mark.slow
def test_odta_membership_on_larger_trees():
    rs = np.random.RandomState(15)
    for _ in range(200):
        s = random_odta(rs, n_states=int(rs.randint(1, 3)), sigma=('a', 'b'))
        t = random_tree(rs, int(rs.randint(1, 9)), sigma=('a', 'b'), max_value=4)
        assert member(s, t) is accepted_by_outputs(s, t)


def test_lifted_membership_agrees():
    for s, t in random_pairs(40, seed=12):
        assert member(lift_weak(s), t) is member(s, t)


def test_zonal_conversion_agrees(profile_tree):
    for s in (class_count_odta(SIGMA, 'ab', 2), class_count_odta(SIGMA, 'ab', 3), two_comparable_odta(SIGMA)):
        assert member(zonal_convert(s), profile_tree) is member(s, profile_tree)
    for s, t in random_pairs(30, seed=13):
        assert member(zonal_convert(s), t) is member(s, t)


def test_union_and_intersection_pointwise():
    s1 = two_comparable_weak(('a', 'b'))
    s2 = class_count_mod_weak(('a', 'b'), 'a', 2)
    union, inter = odta_union(s1, s2), odta_intersect(s1, s2)
    rs = np.random.RandomState(5)
    for _ in range(40):
        t = random_tree(rs, int(rs.randint(1, 5)), sigma=('a', 'b'), max_value=3)
        m1, m2 = member(s1, t), member(s2, t)
        assert member(union, t) is (m1 or m2)
        assert member(inter, t) is (m1 and m2)


@pytest.mark.slow
def test_closure_on_random_pairs():
    rs = np.random.RandomState(16)
    sigma = ('a', 'b')
    for i in range(50):
        make = random_odta if i % 2 else random_weak_odta
        s1 = make(rs, n_states=int(rs.randint(1, 3)), sigma=sigma)
        s2 = make(rs, n_states=int(rs.randint(1, 3)), sigma=sigma)
        union, inter = odta_union(s1, s2), odta_intersect(s1, s2)
        for _ in range(4):
            t = random_tree(rs, int(rs.randint(1, 5)), sigma=sigma, max_value=3)
            m1, m2 = member(s1, t), member(s2, t)
            assert member(union, t) is (m1 or m2)
            assert member(inter, t) is (m1 and m2)


def test_intersection_keeps_distinctness():
    s1 = parent_differing_max_odta()
    s2 = class_count_odta(('a', 'b'), 'a', 1)
    inter = odta_intersect(s1, s2)
    good = OrderedDataTree.from_nested(('b', 1, [('a', 2, [])]))
    twins = OrderedDataTree.from_nested(('b', 1, [('a', 2, []), ('a', 2, [])]))
    assert member(inter, good) is True
    assert member(inter, twins) is False


def test_closure_rejects_mixed_operands():
    with pytest.raises(OrdataError):
        odta_union(two_comparable_weak(), two_comparable_odta())
    with pytest.raises(OrdataError):
        odta_intersect(two_comparable_weak(('a', 'b')), all_accepting(('a', 'c')))


def test_output_counts(profile_tree):
    counts = output_counts(profile_tree)
    assert counts[sym('a')] == 4 and counts[sym('b')] == 4 and counts[sym('c')] == 3
    assert counts[cls('ab')] == 2 and counts[cls('c')] == 0


def test_extended_membership(profile_tree):
    base = all_accepting(SIGMA)
    assert member(ExtendedWeakODTA(base, ge({sym('a'): 1}, 4)), profile_tree) is True
    assert member(ExtendedWeakODTA(base, ge({sym('a'): 1}, 5)), profile_tree) is False
    assert member(ExtendedWeakODTA(base, eq({cls('ab'): 1, cls('ac'): -2}, 0)), profile_tree) is True


def test_extended_membership_with_quantifier(profile_tree):
    h = aux('even')
    even_b = exists([h], eq({sym('b'): 1, h: -2}, 0))
    assert member(ExtendedWeakODTA(all_accepting(SIGMA), even_b), profile_tree) is True
    odd_b = exists([h], eq({sym('b'): 1, h: -2}, 1))
    assert member(ExtendedWeakODTA(all_accepting(SIGMA), odd_b), profile_tree) is False


def test_extended_rejects_foreign_keys():
    with pytest.raises(OrdataError):
        ExtendedWeakODTA(all_accepting(('a',)), ge({sym('z'): 1}, 1))


def one_top_value_automaton(sigma):
    """ String ODTA whose prefix tree has exactly one top-level value. """
    symbols = nonempty_subsets(sigma)
    alphabet = (ROOT,) + tuple(symbols)
    one = Nfa((0, 1), ('n',), frozenset([(0, 'n', 1)]), {0}, {1})
    anything = star_automaton(['n'], name='h')
    horizontal = [(('r', ROOT), one)] + [(('n', s), anything) for s in symbols]
    a = UnrankedTreeAutomaton(('r', 'n'), alphabet, tuple(horizontal), {'r'})
    return StringWeakODTA(identity_transducer(all_trees_automaton(tuple(sigma))), a)


def test_string_membership(string_tree):
    s = one_top_value_automaton(SIGMA)
    assert member(s, string_tree) is True
    split = StringDataTree(('a', 'b'), ((1,), ()), ('0', '1'))
    assert member(s, split) is False
    nested = StringDataTree(('a', 'b'), ((1,), ()), ('0', '01'))
    assert member(s, nested) is True


def test_string_membership_needs_strings(profile_tree):
    with pytest.raises(OrdataError):
        member(one_top_value_automaton(SIGMA), profile_tree)


def test_weak_odta_validation():
    tr = identity_transducer(all_trees_automaton(('a',)))
    with pytest.raises(OrdataError):
        WeakODTA(tr, star_automaton([frozenset('z')]))
    with pytest.raises(OrdataError):
        WeakODTA(tr, star_automaton([frozenset('a')]), {'z'})


@pytest.mark.parametrize('make', [
    lambda: two_comparable_weak(),
    lambda: two_comparable_odta(),
    lambda: class_count_weak(SIGMA, 'ab', 2),
    lambda: ExtendedWeakODTA(all_accepting(SIGMA), ge({cls('ab'): 1}, 2)),
])
def test_bundle_text_keeps_membership(make, chain):
    s = make()
    text = serialize_bundle(s)
    back = parse_bundle(text)
    assert type(back) is type(s)
    for t in (chain, increasing_chain(3), swap_values(increasing_chain(3), 0, 2)):
        assert member(back, t) == member(s, t)


def test_string_bundle_keeps_membership(string_tree):
    s = one_top_value_automaton(SIGMA)
    back = parse_bundle(serialize_bundle(s))
    assert isinstance(back, StringWeakODTA)
    assert member(back, string_tree) is True
    assert member(back, StringDataTree(('a', 'b'), ((1,), ()), ('0', '1'))) is False
