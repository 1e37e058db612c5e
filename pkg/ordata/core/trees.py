from dataclasses import dataclass
from functools import cached_property

from ordata import MAX_VALUE
from ordata.common.errors import OrdataError, UnknownSymbolError


@dataclass(frozen=True)
class Alphabet(object):
    """ Finite ordered set of symbols. Iteration follows declaration order. """

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, 'symbols', tuple(self.symbols))
        if not self.symbols:
            raise OrdataError('alphabet must not be empty')
        if len(set(self.symbols)) != len(self.symbols):
            raise OrdataError('alphabet {} has duplicate symbols'.format(self.symbols))

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self._index

    @cached_property
    def _index(self):
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, sym):
        if sym not in self._index:
            raise UnknownSymbolError(sym)
        return self._index[sym]


@dataclass(frozen=True)
class LabeledTree(object):
    """
    Finite, nonempty, ordered unranked tree with one label per node.

    Nodes are numbered in preorder, the root is node 0 and `children[u]` lists the
    children of u from left to right. A node's address is its path of child indices,
    so the root has address ().
    """

    labels: tuple
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, 'labels', tuple(self.labels))
        object.__setattr__(self, 'children', tuple(tuple(c) for c in self.children))

        n = len(self.labels)
        if n == 0:
            raise OrdataError('trees are nonempty')
        if len(self.children) != n:
            raise OrdataError('children table has {} entries for {} nodes'.format(len(self.children), n))

        # the table must describe a preorder numbering
        order = []
        stack = [0]
        while stack:
            u = stack.pop()
            order.append(u)
            if len(order) > n:
                raise OrdataError('children table contains a cycle')
            for c in reversed(self.children[u]):
                if not 0 < c < n:
                    raise OrdataError('node {} has invalid child {}'.format(u, c))
                stack.append(c)
        if order != list(range(n)):
            raise OrdataError('children table is not a preorder tree')

    def __len__(self):
        return len(self.labels)

    @property
    def size(self):
        return len(self.labels)

    def nodes(self):
        return range(len(self.labels))

    @cached_property
    def parent(self):
        parent = [-1] * len(self.labels)
        for u, kids in enumerate(self.children):
            for c in kids:
                parent[c] = u
        return tuple(parent)

    @cached_property
    def addresses(self):
        addr = [()] * len(self.labels)
        for u, kids in enumerate(self.children):
            for i, c in enumerate(kids):
                addr[c] = addr[u] + (i,)
        return tuple(addr)

    @cached_property
    def next_sibling(self):
        nxt = [-1] * len(self.labels)
        for kids in self.children:
            for a, b in zip(kids, kids[1:]):
                nxt[a] = b
        return tuple(nxt)

    @cached_property
    def prev_sibling(self):
        prv = [-1] * len(self.labels)
        for kids in self.children:
            for a, b in zip(kids, kids[1:]):
                prv[b] = a
        return tuple(prv)

    def postorder(self):
        """ Children before parents. """
        return range(len(self.labels) - 1, -1, -1)

    def address(self, u):
        return self.addresses[u]

    def node_at(self, address):
        u = 0
        for i in address:
            u = self.children[u][i]
        return u

    def edges(self):
        """ Child edges (parent, child) and next-sibling edges (left, right). """
        for u, kids in enumerate(self.children):
            for c in kids:
                yield u, c
            for a, b in zip(kids, kids[1:]):
                yield a, b

    def relabel(self, labels):
        return LabeledTree(labels, self.children)

    def to_nested(self, u=0):
        return self.labels[u], [self.to_nested(c) for c in self.children[u]]

    @classmethod
    def from_nested(cls, nested):
        """ Builds a tree from (label, [children...]) tuples. """
        labels, children = [], []

        def visit(node):
            label, kids = node
            u = len(labels)
            labels.append(label)
            children.append([])
            for k in kids:
                children[u].append(visit(k))
            return u

        visit(nested)
        return cls(tuple(labels), tuple(tuple(c) for c in children))


def _check_value(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise OrdataError('data value {!r} is not a natural'.format(v))
    if not 0 <= v <= MAX_VALUE:
        raise OrdataError('data value {} outside the 64-bit natural range'.format(v))


@dataclass(frozen=True)
class OrderedDataTree(LabeledTree):
    """ Labeled tree whose nodes additionally carry a natural data value. """

    values: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, 'values', tuple(self.values))
        if len(self.values) != len(self.labels):
            raise OrdataError('{} values given for {} nodes'.format(len(self.values), len(self.labels)))
        for v in self.values:
            self._check(v)

    @staticmethod
    def _check(v):
        _check_value(v)

    def projection(self):
        """ The underlying labeled tree, data values dropped. """
        return LabeledTree(self.labels, self.children)

    def with_values(self, values):
        return type(self)(self.labels, self.children, tuple(values))

    def relabel(self, labels):
        return type(self)(labels, self.children, self.values)

    @cached_property
    def distinct_values(self):
        return tuple(sorted(set(self.values)))

    def to_nested(self, u=0):
        return self.labels[u], self.values[u], [self.to_nested(c) for c in self.children[u]]

    @classmethod
    def from_nested(cls, nested):
        """ Builds a tree from (label, value, [children...]) tuples. """
        labels, values, children = [], [], []

        def visit(node):
            label, value, kids = node
            u = len(labels)
            labels.append(label)
            values.append(value)
            children.append([])
            for k in kids:
                children[u].append(visit(k))
            return u

        visit(nested)
        return cls(tuple(labels), tuple(tuple(c) for c in children), tuple(values))

    @classmethod
    def from_labeled(cls, tree, values):
        return cls(tree.labels, tree.children, tuple(values))


@dataclass(frozen=True)
class StringDataTree(OrderedDataTree):
    """ Data tree whose values are nonempty bit-strings, compared under the prefix order. """

    @staticmethod
    def _check(v):
        if not isinstance(v, str) or not v or set(v) - {'0', '1'}:
            raise OrdataError('string data value {!r} is not a nonempty bit-string'.format(v))

    @cached_property
    def distinct_values(self):
        return tuple(sorted(set(self.values)))


def is_prefix(s, t):
    """ Prefix order on bit-strings, reflexive. """
    return t.startswith(s)
