from collections import Counter

import numpy as np
import pytest

from ordata.automata.nfa import Nfa
from ordata.automata.transducer import identity_transducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, ta_empty, ta_enumerate
from ordata.cli.generate import random_odta, random_weak_odta
from ordata.core.profiles import ABSENT, ALL_PROFILES, DIFF, ROOT_PROFILE, SAME, ProfileTriple
from ordata.core.trees import StringDataTree
from ordata.core.values import value_classes
from ordata.odta import EMPTY, EMPTY_WITHIN_CAPS, NONEMPTY, EmptinessCaps, ExtendedWeakODTA, WeakODTA, \
    brute_force_search, empty, empty_odta, empty_weak, k_parameter, lift_weak, member, theoretical_bounds
from ordata.odta.fixtures import all_accepting, class_count_mod_odta, class_count_odta, class_count_weak, \
    never_accepting, parent_differing_max_odta, two_comparable_odta, two_comparable_weak
from ordata.odta.automaton import GuessBundle
from ordata.odta.emptiness import FREE, OdtaEmptiness, ZoneTracker, gamma0_compatible, zone_count_key
from ordata.odta.weak_emptiness import extended_automaton
from ordata.presburger.formula import cls, conj, ge, le, sym

from tests.test_membership import one_top_value_automaton

CAPS = EmptinessCaps(max_nodes=3, max_values=3)


def leaf_only(sigma=('a',)):
    """ Weak ODTA over single-node trees whose value automaton wants two values in class {a}. """
    h = Nfa((0,), (), frozenset(), {0}, {0})
    base = UnrankedTreeAutomaton(('q',), sigma, tuple((('q', a), h) for a in sigma), {'q'})
    return WeakODTA(identity_transducer(base), class_count_weak(sigma, 'a', 2).value_automaton)


def one_distinct_value():
    """ Γ₀ = {a}: every a-node needs its own value, and the value automaton allows exactly one. """
    base = all_accepting(('a',))
    single = frozenset('a')
    m = Nfa((0, 1), (single,), frozenset([(0, single, 1)]), {0}, {1})
    return WeakODTA(base.transducer, m, {'a'})


def assert_witness(s, verdict):
    assert verdict.kind == NONEMPTY
    assert member(s, verdict.witness) is True
    return verdict.witness


@pytest.mark.parametrize('make', [
    lambda: all_accepting(('a', 'b')),
    lambda: class_count_weak(('a', 'b'), 'ab', 2),
    lambda: two_comparable_weak(),
    lambda: one_distinct_value(),
])
def test_weak_nonempty_with_witness(make):
    s = make()
    verdict = empty(s)
    assert_witness(s, verdict)
    assert verdict.report['procedure'] == 'empty-weak'
    assert 'output' in verdict.certificate and 'value_word' in verdict.certificate


def test_class_count_witness_realizes_count():
    s = class_count_weak(('a', 'b'), 'ab', 3)
    witness = assert_witness(s, empty_weak(s))
    assert len(value_classes(witness)[frozenset('ab')]) == 3


def test_distinct_labels_force_single_node():
    s = one_distinct_value()
    witness = assert_witness(s, empty(s))
    assert len(witness) == 1
    assert empty(ExtendedWeakODTA(s, ge({sym('a'): 1}, 2))).kind == EMPTY


def test_extended_automaton_writes_the_run():
    tr = two_comparable_weak().transducer
    ext = extended_automaton(tr)
    assert set((q, a, b) for a, q, b in ext.alphabet) <= set(tr.outputs)
    assert not list(ta_enumerate(ext, 1))
    trees = list(ta_enumerate(ext, 3, limit=20))
    assert trees
    for tree, run in trees:
        assert all(lab[1] == q for lab, q in zip(tree.labels, run))
    assert ta_empty(extended_automaton(never_accepting(('a',)).transducer)) is False


def test_profiled_extended_automaton():
    assert not ta_empty(extended_automaton(two_comparable_odta().transducer, profiled=True))


def test_weak_empty():
    assert empty(never_accepting(('a', 'b'))).kind == EMPTY
    assert empty_weak(leaf_only()).kind == EMPTY


def test_extended_nonempty():
    s = ExtendedWeakODTA(all_accepting(('a', 'b')), ge({sym('a'): 1}, 3))
    verdict = empty(s)
    witness = assert_witness(s, verdict)
    assert Counter(witness.labels)['a'] >= 3
    assert verdict.report['procedure'] == 'empty-weak-ext'


def test_extended_class_count():
    s = ExtendedWeakODTA(all_accepting(('a', 'b')), conj(ge({cls('ab'): 1}, 2), ge({cls('a'): 1}, 1)))
    witness = assert_witness(s, empty(s))
    classes = value_classes(witness)
    assert len(classes[frozenset('ab')]) >= 2 and len(classes[frozenset('a')]) >= 1


def test_extended_unsatisfiable():
    s = ExtendedWeakODTA(all_accepting(('a', 'b')), conj(ge({sym('a'): 1}, 1), le({sym('a'): 1}, 0)))
    assert empty(s).kind == EMPTY


@pytest.mark.parametrize('make', [
    lambda: two_comparable_odta(),
    lambda: parent_differing_max_odta(),
    lambda: class_count_odta(('a',), 'a', 2),
    lambda: class_count_mod_odta(('a', 'b'), 'ab', 2),
    lambda: lift_weak(all_accepting(('a', 'b'))),
])
def test_odta_nonempty_with_witness(make):
    s = make()
    verdict = empty(s, CAPS)
    assert_witness(s, verdict)
    assert verdict.report['procedure'] == 'empty-odta'
    assert verdict.report['K'] == k_parameter(s)
    assert verdict.report['threshold'] >= 1


def test_odta_empty():
    assert empty(lift_weak(never_accepting(('a', 'b'))), CAPS).kind == EMPTY
    verdict = empty_odta(lift_weak(leaf_only()), CAPS)
    assert verdict.kind == EMPTY
    assert verdict.report['closed']


def test_odta_empty_within_caps():
    tight = EmptinessCaps(max_nodes=3, max_values=3, constant_cap=0, degree_cap=1)
    verdict = empty(class_count_odta(('a',), 'a', 5), tight)
    assert verdict.kind == EMPTY_WITHIN_CAPS
    assert verdict.report['caps']['degree_cap'] == 1
    assert verdict.report['stats']['bundles'] == 2


def test_odta_witness_beyond_max_nodes():
    s = class_count_odta(('a',), 'a', 5)
    verdict = empty(s, CAPS)
    witness = assert_witness(s, verdict)
    assert len(witness) >= 5
    assert len(value_classes(witness)[frozenset('a')]) == 5
    assert verdict.report['stats']['bundles'] >= 1


def test_odta_bundle_cap():
    verdict = empty(class_count_odta(('a',), 'a', 5), EmptinessCaps(max_bundles=1))
    assert verdict.kind == EMPTY_WITHIN_CAPS
    assert verdict.report['closed'] is False
    assert verdict.report['stats']['bundles'] == 1


def test_weak_unverified_witness_is_not_reported():
    verdict = empty(class_count_weak(('a', 'b'), 'ab', 2), member_budget=1)
    assert verdict.kind == EMPTY_WITHIN_CAPS
    assert 'budget' in verdict.report['reason']
    assert verdict.witness is None


def test_odta_unverified_witness_is_not_reported():
    verdict = empty(class_count_odta(('a',), 'a', 2), CAPS, member_budget=1)
    assert verdict.kind == EMPTY_WITHIN_CAPS
    assert verdict.report['stats']['unverified'] >= 1
    assert verdict.report['closed'] is False


def test_gamma0_compatible():
    p = frozenset([frozenset('ab'), frozenset('a')])
    assert not gamma0_compatible(p, {'a'})
    assert gamma0_compatible(p, {'b'})
    assert gamma0_compatible(p, set())


def _child(parent, left, right, kappa, labels, degree=0):
    return ('q', ProfileTriple(left, parent, right)), kappa, frozenset(labels), degree


def test_zone_tracker_closes_free_zones():
    tracker = ZoneTracker(GuessBundle((), {}, {}, 0, 0, degree=1), {'g0'}, 1)
    start = tracker.start('g1')
    steps = list(tracker.step(FREE, start, _child(DIFF, ABSENT, ABSENT, FREE, ['g0'])))
    assert steps == [((frozenset(['g1']), 1, ('closed', FREE, False)), zone_count_key(FREE, ['g0'], 1))]
    assert tracker.result(steps[0][0]) == (frozenset(['g1']), 1)

    # the free parent already uses the only free neighbour, so no free sibling may follow
    first = list(tracker.step(FREE, start, _child(DIFF, ABSENT, DIFF, FREE, ['g0'])))
    assert [scan[2] for scan, _ in first] == [('closed', FREE, False)]
    assert not list(tracker.step(FREE, first[0][0], _child(DIFF, DIFF, ABSENT, FREE, ['g0'])))
    # an open run has no result until it closes
    opened = list(tracker.step(FREE, start, _child(DIFF, ABSENT, SAME, FREE, ['g1'])))
    assert [tracker.result(scan) for scan, _ in opened] == [None]


def test_zone_tracker_constants():
    p = frozenset([frozenset(['g0'])])
    bundle = GuessBundle((p,), {p: 1}, {p: (0,)}, 1, 1, degree=0)
    tracker = ZoneTracker(bundle, {'g0'}, 0)
    assert tracker.kappas == (FREE, 0)
    start = tracker.start('g1')
    # a constant zone below the same constant is one zone, not two
    assert not list(tracker.step(0, start, _child(DIFF, ABSENT, ABSENT, 0, ['g0'])))
    # Γ₀ labels occur once per zone
    assert not list(tracker.step(0, tracker.start('g0'), _child(SAME, ABSENT, ABSENT, 0, ['g0'])))
    # label sets outside the pattern do not close a constant zone
    assert not list(tracker.step(FREE, start, _child(DIFF, ABSENT, ABSENT, 0, ['g1'])))
    closed = list(tracker.step(FREE, start, _child(DIFF, ABSENT, ABSENT, 0, ['g0'])))
    assert [mark for _, mark in closed] == [zone_count_key(0, ['g0'], 0)]
    assert tracker.root_ok(0, frozenset(['g0'])) and not tracker.root_ok(0, frozenset(['g1']))


def test_bundles_by_size():
    p = frozenset([frozenset(['g0'])])
    proc = OdtaEmptiness(class_count_odta(('a',), 'a', 1), EmptinessCaps(constant_cap=1, degree_cap=1))
    proc.candidates = [p]
    bundles = list(proc.bundles())
    sizes = [b.size() for b in bundles]
    assert sizes == [(0, 0, 0, 0), (1, 0, 0, 0), (1, 1, 1, 0), (1, 1, 1, 1), (2, 1, 1, 0), (2, 1, 1, 1)]
    assert bundles[2].counts == {p: 1} and bundles[2].constants() == [(0, p)]
    assert bundles[3].pool_d == (0,) and bundles[3].pattern_of(0) == p


def test_theoretical_bounds():
    assert theoretical_bounds(1)['threshold'] == 7
    assert theoretical_bounds(2)['power'] == 256
    assert theoretical_bounds(2)['threshold'] == 2561
    big = theoretical_bounds(k_parameter(two_comparable_odta()))
    assert big['K'] == 810 and big['power'] is None and big['power_digits'] > 10 ** 8


def test_string_emptiness():
    s = one_top_value_automaton(('a', 'b'))
    verdict = empty(s)
    witness = assert_witness(s, verdict)
    assert isinstance(witness, StringDataTree)


def test_dispatch_rejects_unknown_types():
    with pytest.raises(TypeError):
        empty(object())


def test_report_file(tmp_path):
    path = str(tmp_path / 'runs.log')
    empty(all_accepting(('a',)), report_file=path, report_format='record', name='all')
    with open(path) as f:
        line = f.read()
    assert '"verdict":"nonempty"' in line and '"name":"all"' in line


@pytest.mark.slow
def test_weak_emptiness_against_brute_force():
    rs = np.random.RandomState(21)
    kinds = Counter()
    for _ in range(200):
        s = random_weak_odta(rs, n_states=int(rs.randint(1, 3)))
        verdict = empty(s)
        kinds[verdict.kind] += 1
        if verdict.kind == NONEMPTY:
            assert member(s, verdict.witness) is True
        elif verdict.kind == EMPTY:
            assert brute_force_search(s, max_nodes=6, max_values=2) is None
            assert brute_force_search(s, max_nodes=4, max_values=4) is None
    assert kinds[NONEMPTY] and kinds[EMPTY]


@pytest.mark.slow
def test_odta_emptiness_against_brute_force():
    rs = np.random.RandomState(22)
    kinds = Counter()
    for _ in range(40):
        s = random_odta(rs, n_states=int(rs.randint(1, 3)))
        verdict = empty(s, CAPS)
        kinds[verdict.kind] += 1
        if verdict.kind == NONEMPTY:
            assert member(s, verdict.witness) is True
        elif verdict.kind == EMPTY:
            assert brute_force_search(s, max_nodes=4, max_values=4) is None
    assert kinds[NONEMPTY]


def test_random_odta_reads_profiles():
    rs = np.random.RandomState(5)
    s = random_odta(rs, n_states=1, density=0.5)
    profiles = {lab[1] for (_, lab), _ in s.transducer.base.horizontal}
    assert ROOT_PROFILE in profiles
    assert len(profiles) < len(ALL_PROFILES)
