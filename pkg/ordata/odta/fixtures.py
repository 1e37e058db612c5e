"""
Reference automata with known languages.

The weak constructors return WeakODTA; wrap them in `lift_weak` for the ODTA form.
Output labels are plain strings ('alpha', 'beta', 'gamma') so every fixture can be
written to a bundle file.
"""
from ordata.automata.nfa import Nfa, empty_automaton, star_automaton
from ordata.automata.transducer import TreeTransducer, identity_transducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, all_trees_automaton
from ordata.common.utils import nonempty_subsets
from ordata.core.profiles import ALL_PROFILES, DIFF
from ordata.core.trees import OrderedDataTree
from ordata.odta.automaton import ODTA, WeakODTA, all_subsets_automaton, lift_weak, profile_alphabet

ALPHA, BETA, GAMMA = 'alpha', 'beta', 'gamma'


def _one_of(filler, marked):
    """ filler* (one of `marked`) filler* """
    trans = {(0, filler, 0), (1, filler, 1)} | {(0, m, 1) for m in marked}
    return Nfa((0, 1), (filler,) + tuple(marked), frozenset(trans), {0}, {1})


def _count_automaton(sigma, s, m, modular):
    symbols = nonempty_subsets(sigma)
    s = frozenset(s)
    assert s in symbols, 'counted class {} is not a nonempty subset of {}'.format(sorted(s), sorted(sigma))
    states = tuple(range(m if modular else m + 1))
    trans = set()
    for i in states:
        for sym in symbols:
            if sym != s:
                trans.add((i, sym, i))
            elif modular:
                trans.add((i, sym, (i + 1) % m))
            elif i < m:
                trans.add((i, sym, i + 1))
    return Nfa(states, symbols, frozenset(trans), {0}, {0} if modular else {m})


def all_accepting(sigma):
    """ Accepts every ordered-data tree over `sigma`. """
    tr = identity_transducer(all_trees_automaton(tuple(sigma)))
    return WeakODTA(tr, all_subsets_automaton(sigma))


def never_accepting(sigma):
    """ Same transducer as `all_accepting`, but the value automaton accepts nothing. """
    tr = identity_transducer(all_trees_automaton(tuple(sigma)))
    return WeakODTA(tr, empty_automaton(nonempty_subsets(sigma)))


def two_comparable_weak(sigma=('a', 'b'), label='a'):
    """
    Trees with two `label`-nodes u, v where u is an ancestor of v and val(v) <= val(u).

    The transducer marks u with alpha and v with beta (everything else gamma); the
    value automaton accepts the words whose beta position is at most the alpha
    position.
    """
    sigma = tuple(sigma)
    states = ('rest', 'low', 'down', 'high', 'up')
    rest = star_automaton(['rest'], name='h')
    to_low = _one_of('rest', ('low', 'down'))
    to_high = _one_of('rest', ('high', 'up'))

    horizontal, outputs = [], set()
    for a in sigma:
        horizontal += [(('rest', a), rest), (('down', a), to_low), (('up', a), to_high)]
        outputs |= {('rest', a, GAMMA), ('down', a, GAMMA), ('up', a, GAMMA)}
    horizontal += [(('low', label), rest), (('high', label), to_low)]
    outputs |= {('low', label, BETA), ('high', label, ALPHA)}
    base = UnrankedTreeAutomaton(states, sigma, tuple(horizontal), {'high', 'up'})
    tr = TreeTransducer(base, (ALPHA, BETA, GAMMA), frozenset(outputs))

    trans = set()
    for sym in nonempty_subsets((ALPHA, BETA, GAMMA)):
        has_a, has_b = ALPHA in sym, BETA in sym
        if not has_a and not has_b:
            trans |= {(0, sym, 0), (1, sym, 1), (2, sym, 2)}
        elif has_a and has_b:
            trans.add((0, sym, 2))
        elif has_b:
            trans.add((0, sym, 1))
        else:
            trans.add((1, sym, 2))
    m = Nfa((0, 1, 2), nonempty_subsets((ALPHA, BETA, GAMMA)), frozenset(trans), {0}, {2})
    return WeakODTA(tr, m)


def two_comparable_odta(sigma=('a', 'b'), label='a'):
    return lift_weak(two_comparable_weak(sigma, label))


def class_count_weak(sigma, s, m):
    """ Trees with exactly m values in the class [s]. """
    assert m >= 1, 'count must be positive'
    tr = identity_transducer(all_trees_automaton(tuple(sigma)))
    return WeakODTA(tr, _count_automaton(sigma, s, m, modular=False))


def class_count_odta(sigma, s, m):
    return lift_weak(class_count_weak(sigma, s, m))


def class_count_mod_weak(sigma, s, m):
    """ Trees where |[s]| is a multiple of m. """
    assert m >= 1, 'modulus must be positive'
    tr = identity_transducer(all_trees_automaton(tuple(sigma)))
    return WeakODTA(tr, _count_automaton(sigma, s, m, modular=True))


def class_count_mod_odta(sigma, s, m):
    return lift_weak(class_count_mod_weak(sigma, s, m))


def parent_differing_max_odta(sigma=('a', 'b'), label='a'):
    """
    Trees whose `label`-nodes with a value different from their parent's carry pairwise
    distinct values, one of them the largest value of the tree.

    Such nodes are output alpha (the root never is), all others beta; Γ₀ = {alpha}
    and the value automaton accepts the words whose last symbol contains alpha.
    """
    sigma = tuple(sigma)
    labels = profile_alphabet(sigma)
    h = star_automaton(['q'], name='h')
    base = UnrankedTreeAutomaton(('q',), labels, tuple((('q', lab), h) for lab in labels), {'q'})
    outputs = frozenset(('q', (a, p), ALPHA if a == label and p.parent == DIFF else BETA)
                        for a in sigma for p in ALL_PROFILES)
    tr = TreeTransducer(base, (ALPHA, BETA), outputs)

    symbols = nonempty_subsets((ALPHA, BETA))
    trans = frozenset((p, sym, 'yes' if ALPHA in sym else 'no') for p in ('no', 'yes') for sym in symbols)
    m = Nfa(('no', 'yes'), symbols, trans, {'no'}, {'yes'})
    return ODTA(tr, m, {ALPHA})


def increasing_chain(n, label='a'):
    """
    A path of n `label`-nodes with values 1..n from the root down.

    It lies outside the language of `two_comparable_odta`. For any ODTA S with output
    alphabet Γ and n = |Γ| + 1, two nodes of an output share a label; swapping their
    values keeps the profile, so S still accepts the swapped tree, which lies inside
    that language. Hence no ODTA accepts its complement.
    """
    assert n >= 1, 'chain needs a node'
    children = tuple((i + 1,) if i + 1 < n else () for i in range(n))
    return OrderedDataTree((label,) * n, children, tuple(range(1, n + 1)))


def swap_values(t, u, v):
    values = list(t.values)
    values[u], values[v] = values[v], values[u]
    return t.with_values(tuple(values))
