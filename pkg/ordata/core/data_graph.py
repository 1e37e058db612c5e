import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from ordata.common.errors import OrdataError, PreconditionViolated, VerificationError
from ordata.common.utils import canonical_sorted

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DataGraph(object):
    """
    Undirected simple graph over vertices 0..n-1, each vertex carrying a label and a value.

    `values` may contain None for unassigned vertices while a recoloring is in progress.
    """

    labels: tuple
    values: tuple
    edges: frozenset

    def __post_init__(self):
        n = len(self.labels)
        if len(self.values) != n:
            raise OrdataError('{} values for {} vertices'.format(len(self.values), n))
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise OrdataError('self-loop on vertex {}'.format(u))
            if not (0 <= u < n and 0 <= v < n):
                raise OrdataError('edge ({}, {}) references unknown vertex'.format(u, v))
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, 'labels', tuple(self.labels))
        object.__setattr__(self, 'values', tuple(self.values))
        object.__setattr__(self, 'edges', frozenset(norm))

    def __len__(self):
        return len(self.labels)

    @cached_property
    def graph(self):
        g = nx.Graph()
        g.add_nodes_from(range(len(self.labels)))
        g.add_edges_from(self.edges)
        return g

    def neighbors(self, u):
        return sorted(self.graph.neighbors(u))

    def degree(self):
        """ deg(G), the maximal vertex degree. """
        return max((d for _, d in self.graph.degree()), default=0)

    def alphabet(self):
        return canonical_sorted(set(self.labels))

    def value_set(self, label):
        """ Val_G(a). """
        return frozenset(v for lab, v in zip(self.labels, self.values) if lab == label and v is not None)

    def conflicts(self):
        return sorted((u, v) for u, v in self.edges
                      if self.values[u] is not None and self.values[u] == self.values[v])

    def with_values(self, values):
        return DataGraph(self.labels, tuple(values), self.edges)


def required_values(g, alphabet_size=None):
    """ deg(G)·|Γ| + deg(G) + 1 """
    deg = g.degree()
    gamma = len(g.alphabet()) if alphabet_size is None else alphabet_size
    return deg * gamma + deg + 1


def recolor_data_graph(g, alphabet_size=None):
    """
    Reassigns values so that adjacent vertices differ while every Val_G(a) is kept.

    Parameters
    ----------
    g: DataGraph
        graph whose per-label value sets are large enough

    alphabet_size: int
        |Γ| used in the bound, defaults to the number of labels present in g

    Returns
    -------
        DataGraph with the same vertices, edges and labels
    """
    bound = required_values(g, alphabet_size)
    by_label = {}
    for u, lab in enumerate(g.labels):
        by_label.setdefault(lab, []).append(u)

    for lab in canonical_sorted(by_label):
        actual = len(g.value_set(lab))
        if actual < bound:
            raise PreconditionViolated(lab, bound, actual)

    if not g.edges:
        return g

    # initial assignment covers Val(a) bijectively with the smallest a-vertices
    values = [None] * len(g)
    pools = {}
    for lab, members in by_label.items():
        pool = sorted(g.value_set(lab))
        pools[lab] = pool
        for u, d in zip(members, pool):
            values[u] = d

    def clashes(u, d):
        return any(values[w] == d for w in g.neighbors(u))

    # swap away conflicts, one edge at a time
    while True:
        conflict = next(((u, v) for u, v in sorted(g.edges)
                         if values[u] is not None and values[u] == values[v]), None)
        if conflict is None:
            break
        u = conflict[0]
        d = values[u]
        lab = g.labels[u]
        for w in by_label[lab]:
            if w == u or values[w] is None:
                continue
            dw = values[w]
            values[u], values[w] = dw, d
            if not clashes(u, dw) and not clashes(w, d):
                break
            values[u], values[w] = d, dw
        else:
            raise VerificationError('no swap partner for vertex {} with value {}'.format(u, d))

    # fill in the remaining vertices with the smallest value free in their neighbourhood
    for u in range(len(g)):
        if values[u] is not None:
            continue
        taken = {values[w] for w in g.neighbors(u)}
        values[u] = next(d for d in pools[g.labels[u]] if d not in taken)

    out = g.with_values(values)
    assert not out.conflicts(), 'recoloring left conflicting edges'
    return out


def check_recoloring(before, after):
    """ Conservation and correctness of a recoloring, checked by brute force. """
    if before.labels != after.labels or before.edges != after.edges:
        return False
    for lab in set(before.labels):
        if before.value_set(lab) != after.value_set(lab):
            return False
    return all(after.values[u] != after.values[v] for u, v in after.edges)
