from dataclasses import dataclass

import networkx as nx

from ordata.core.data_graph import DataGraph


@dataclass(frozen=True)
class Zone(object):
    id: int
    nodes: tuple
    value: object
    labels: frozenset
    outdegree: int


@dataclass(frozen=True)
class ZonePartition(object):
    """ Zones of a data tree: `zone_of[u]` is the zone id of node u. """

    zone_of: tuple
    zones: tuple

    def __len__(self):
        return len(self.zones)

    def adjacent_pairs(self, t):
        """ Pairs of distinct zones joined by a child or next-sibling edge. """
        pairs = set()
        for u, v in t.edges():
            zu, zv = self.zone_of[u], self.zone_of[v]
            if zu != zv:
                pairs.add((min(zu, zv), max(zu, zv)))
        return sorted(pairs)


def zones_from_equalities(t, same, labels=None):
    """
    Zones from an equality predicate on tree edges.

    `same(u, v)` tells whether the edge (u, v) joins equal values. `labels` overrides
    the node labels used for the zone label sets.
    """
    labels = t.labels if labels is None else labels

    g = nx.Graph()
    g.add_nodes_from(t.nodes())
    g.add_edges_from((u, v) for u, v in t.edges() if same(u, v))

    components = sorted((sorted(c) for c in nx.connected_components(g)), key=lambda c: c[0])
    zone_of = [0] * len(t)
    for z, comp in enumerate(components):
        for u in comp:
            zone_of[u] = z

    # directed edges leaving a zone: parent to child, left to right sibling
    reached = [set() for _ in components]
    for u, v in t.edges():
        if zone_of[u] != zone_of[v]:
            reached[zone_of[u]].add(zone_of[v])

    values = getattr(t, 'values', None)
    zs = tuple(Zone(id=z,
                    nodes=tuple(comp),
                    value=None if values is None else values[comp[0]],
                    labels=frozenset(labels[u] for u in comp),
                    outdegree=len(reached[z]))
               for z, comp in enumerate(components))
    return ZonePartition(tuple(zone_of), zs)


def zones(t):
    """ Maximal connected same-value node sets under child and next-sibling edges. """
    return zones_from_equalities(t, lambda u, v: t.values[u] == t.values[v])


def zonal_string_representation(t):
    """ For each distinct value ascending: the set of label sets of the zones carrying it. """
    part = zones(t)
    by_value = {}
    for z in part.zones:
        by_value.setdefault(z.value, set()).add(z.labels)
    return tuple(frozenset(by_value[v]) for v in sorted(by_value))


def zone_graph(t, part, members=None):
    """
    Data graph on zones: vertex labels are zone label sets, values the zone values,
    edges join adjacent zones. `members` restricts the graph to a subset of zone ids;
    vertices are renumbered in ascending zone id.
    """
    members = sorted(range(len(part.zones)) if members is None else members)
    index = {z: i for i, z in enumerate(members)}
    edges = [(index[a], index[b]) for a, b in part.adjacent_pairs(t) if a in index and b in index]
    return DataGraph(tuple(part.zones[z].labels for z in members),
                     tuple(part.zones[z].value for z in members),
                     frozenset(edges))
