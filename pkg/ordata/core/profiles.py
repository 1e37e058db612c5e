import itertools
from enum import Enum
from typing import NamedTuple

from ordata.common.errors import ParseError
from ordata.core.trees import LabeledTree


class Rel(Enum):
    """ Relation of a node's value to a neighbour's value. """

    SAME = '='
    DIFF = '!'
    ABSENT = '*'

    def __repr__(self):
        return self.value


SAME, DIFF, ABSENT = Rel.SAME, Rel.DIFF, Rel.ABSENT


class ProfileTriple(NamedTuple):
    left: Rel
    parent: Rel
    right: Rel

    def __str__(self):
        return self.left.value + self.parent.value + self.right.value

    @classmethod
    def parse(cls, text):
        if len(text) != 3:
            raise ParseError('profile {!r} must have three characters'.format(text))
        try:
            return cls(*(Rel(ch) for ch in text))
        except ValueError:
            raise ParseError('profile {!r} uses characters other than = ! *'.format(text))


ALL_PROFILES = tuple(ProfileTriple(*rels) for rels in itertools.product(Rel, repeat=3))
ROOT_PROFILE = ProfileTriple(ABSENT, ABSENT, ABSENT)


def _rel(t, u, v):
    if v < 0:
        return ABSENT
    return SAME if t.values[u] == t.values[v] else DIFF


def profile_of(t, u):
    return ProfileTriple(_rel(t, u, t.prev_sibling[u]), _rel(t, u, t.parent[u]), _rel(t, u, t.next_sibling[u]))


def profile(t):
    """ Profile tree of `t`: every label a becomes (a, (left, parent, right)). """
    return LabeledTree(tuple((t.labels[u], profile_of(t, u)) for u in t.nodes()), t.children)


def equalities_from_profile(pt):
    """
    Reads off value equality for every child edge and next-sibling edge of a profile tree.

    Returns a dict mapping the edge (u, v) to True if u and v carry the same value.
    """
    eq = {}
    for u, kids in enumerate(pt.children):
        for c in kids:
            eq[(u, c)] = pt.labels[c][1].parent == SAME
        for a, b in zip(kids, kids[1:]):
            eq[(a, b)] = pt.labels[a][1].right == SAME
    return eq


def is_consistent_profile_tree(pt):
    """ Checks the local profile rules that characterize trees of the form Profile(t). """
    for u in pt.nodes():
        prof = pt.labels[u][1]
        kids = pt.children[u]
        if u == 0 and prof != ROOT_PROFILE:
            return False
        if u != 0 and prof.parent == ABSENT:
            return False
        if (pt.prev_sibling[u] < 0) != (prof.left == ABSENT):
            return False
        if (pt.next_sibling[u] < 0) != (prof.right == ABSENT):
            return False
        for a, b in zip(kids, kids[1:]):
            pa, pb = pt.labels[a][1], pt.labels[b][1]
            if pa.right != pb.left or not triangle_ok(pa.parent, pb.parent, pa.right):
                return False
    return True


def triangle_ok(*rels):
    """ Equality is transitive, so a triangle cannot carry exactly one DIFF edge. """
    return sum(1 for r in rels if r == DIFF) != 1
