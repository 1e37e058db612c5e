from collections import defaultdict

from ordata.core.trees import LabeledTree, OrderedDataTree, StringDataTree, is_prefix

ROOT = 'ROOT'


def labels_by_value(t):
    """ Maps every data value of `t` to the set of labels carrying it. """
    by_value = defaultdict(set)
    for lab, v in zip(t.labels, t.values):
        by_value[v].add(lab)
    return {v: frozenset(labs) for v, labs in by_value.items()}


def value_classes(t):
    """ [S]_t for every nonempty label set S with a nonempty class. """
    classes = defaultdict(set)
    for v, labs in labels_by_value(t).items():
        classes[labs].add(v)
    return {s: frozenset(vs) for s, vs in classes.items()}


def value_sets(t):
    """ V_t(a) per label a. """
    sets = defaultdict(set)
    for lab, v in zip(t.labels, t.values):
        sets[lab].add(v)
    return {a: frozenset(vs) for a, vs in sets.items()}


def count(t, a):
    return sum(1 for lab in t.labels if lab == a)


def string_representation(t):
    """ V(t): the label-set class of each distinct value, in ascending value order. """
    by_value = labels_by_value(t)
    return tuple(by_value[v] for v in sorted(by_value))


def canonical_rank(t):
    """ Replaces every value by its rank among the distinct values, starting at 1. """
    rank = {v: i + 1 for i, v in enumerate(sorted(set(t.values)))}
    return OrderedDataTree(t.labels, t.children, tuple(rank[v] for v in t.values))


def prefix_tree(strings):
    """
    Shapes the prefix tree of a set of bit-strings rooted at the empty string.

    Returns the preorder list of strings (root '' first) and the children table;
    children are ordered lexicographically.
    """
    domain = sorted(set(strings) | {''})
    parent_of = {}
    for s in domain:
        if s == '':
            continue
        cands = [p for p in domain if len(p) < len(s) and is_prefix(p, s)]
        parent_of[s] = max(cands, key=len)

    kids = defaultdict(list)
    for s, p in parent_of.items():
        kids[p].append(s)

    order, children = [], []
    index = {}

    def visit(s):
        u = len(order)
        index[s] = u
        order.append(s)
        children.append([])
        for c in sorted(kids[s]):
            children[u].append(visit(c))
        return u

    visit('')
    return order, tuple(tuple(c) for c in children)


def prefix_tree_representation(t, with_strings=False):
    """
    Tree representation of the values of a string data tree: the prefix tree over
    V_t ∪ {ε}, where value u is labeled by the S with u ∈ [S]_t and the root by ROOT.
    """
    assert isinstance(t, StringDataTree), 'prefix tree representation needs string data'

    by_value = labels_by_value(t)
    order, children = prefix_tree(by_value)
    labels = tuple(ROOT if s == '' else by_value[s] for s in order)
    tree = LabeledTree(labels, children)
    if with_strings:
        return tree, tuple(order)
    return tree
