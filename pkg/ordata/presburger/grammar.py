"""
Parikh images of context-free derivations.

Word and tree automata are both translated into grammars whose derivation trees
mirror accepting runs. Every production p gets a count variable y_p and every
nonterminal N a depth variable d_N. The counts are balanced per nonterminal, and
each used nonterminal must be introduced by a used production whose left-hand side
is strictly shallower, which rules out derivation cycles detached from the start
symbol.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass

from ordata.common.errors import DecodeFailed
from ordata.presburger.formula import aux, conj, disj, eq, exists, ge, minus, total

logger = logging.getLogger(__name__)

START = ('START',)


@dataclass(frozen=True)
class Production(object):
    lhs: object
    rhs: tuple
    emits: tuple
    tag: object


@dataclass(frozen=True, eq=False)
class Grammar(object):
    productions: tuple
    prefix: str

    @property
    def nonterminals(self):
        seen = {START: None}
        for p in self.productions:
            seen.setdefault(p.lhs, None)
            for n in p.rhs:
                seen.setdefault(n, None)
        return list(seen)

    def y(self, i):
        return aux(self.prefix, 'y', i)

    def d(self, n):
        return aux(self.prefix, 'd', self.nonterminals.index(n))


def encode(g, count_keys=()):
    """
    Existential formula whose solutions projected to the emitted keys are the
    Parikh images of complete derivations of `g`.

    Every key in `count_keys` is defined, keys no production emits are forced to 0.
    """
    nts = g.nonterminals
    d_index = {n: aux(g.prefix, 'd', i) for i, n in enumerate(nts)}
    y = [g.y(i) for i in range(len(g.productions))]

    by_lhs = defaultdict(list)
    occurrences = defaultdict(dict)
    emitted = defaultdict(dict)
    for i, p in enumerate(g.productions):
        by_lhs[p.lhs].append(i)
        for n in p.rhs:
            occurrences[n][y[i]] = occurrences[n].get(y[i], 0) + 1
        for k in p.emits:
            emitted[k][y[i]] = emitted[k].get(y[i], 0) + 1

    parts = [eq(total(y[i] for i in by_lhs[START]), 1)]
    for n in nts:
        if n == START:
            continue
        used = total(y[i] for i in by_lhs[n])
        # each occurrence of n is expanded by exactly one n-production
        parts.append(eq(minus(occurrences[n], used), 0))

        intro = []
        for i, p in enumerate(g.productions):
            if n in p.rhs and p.lhs != n:
                intro.append(conj(ge({y[i]: 1}, 1), ge(minus({d_index[n]: 1}, {d_index[p.lhs]: 1}), 1)))
        parts.append(disj(eq(used, 0), *intro))

    keys = list(dict.fromkeys(list(count_keys) + list(emitted)))
    for k in keys:
        parts.append(eq(minus({k: 1}, emitted.get(k, {})), 0))

    quantified = set(y) | set(d_index.values())
    return exists(quantified, *parts)


def derive(g, assignment):
    """
    Rebuilds a derivation tree from the production counts of a solution.

    Returns nested (production, [children]) rooted at a START production.
    """
    counts = []
    for i in range(len(g.productions)):
        k = g.y(i)
        counts.append(assignment[k] if k in assignment else 0)

    depth = {}
    for n in g.nonterminals:
        k = g.d(n)
        depth[n] = assignment[k] if k in assignment else 0

    instances = []
    for i, c in enumerate(counts):
        instances.extend([i] * c)
    prods = g.productions

    # occurrences: (parent instance, rhs position); the root occurrence has parent None
    by_nt = defaultdict(list)
    by_nt[START].append((None, 0))
    for inst, i in enumerate(instances):
        for j, n in enumerate(prods[i].rhs):
            by_nt[n].append((inst, j))

    parent = {}
    child = {}
    lhs_instances = defaultdict(list)
    for inst, i in enumerate(instances):
        lhs_instances[prods[i].lhs].append(inst)
    for n in set(by_nt) | set(lhs_instances):
        occ, insts = by_nt[n], lhs_instances[n]
        if len(occ) != len(insts):
            raise DecodeFailed('nonterminal {} has {} occurrences but {} expansions'.format(n, len(occ), len(insts)))
        for o, inst in zip(occ, insts):
            parent[inst] = o
            child[o] = inst

    if (None, 0) not in child:
        raise DecodeFailed('no start production used')
    root = child[(None, 0)]

    def reachable():
        seen = {root}
        stack = [root]
        while stack:
            inst = stack.pop()
            for j in range(len(prods[instances[inst]].rhs)):
                c = child[(inst, j)]
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def swap(a, b):
        oa, ob = parent[a], parent[b]
        parent[a], parent[b] = ob, oa
        child[oa], child[ob] = b, a

    rounds = 0
    limit = 4 * (len(instances) + 1) * (max(depth.values(), default=0) + 2)
    while True:
        seen = reachable()
        if len(seen) == len(instances):
            break
        rounds += 1
        if rounds > limit:
            raise DecodeFailed('derivation repair does not converge')

        # a detached component carries exactly one cycle
        start = min(set(range(len(instances))) - seen)
        path, inst = [], start
        while inst not in path:
            path.append(inst)
            inst = parent[inst][0]
            if inst is None:
                raise DecodeFailed('detached instance reaches the start symbol')
        cycle = path[path.index(inst):]

        n_star = min((prods[instances[c]].lhs for c in cycle), key=lambda n: (depth[n], str(n)))
        c = min(c for c in cycle if prods[instances[c]].lhs == n_star)

        w = None
        for inst2, i in enumerate(instances):
            p = prods[i]
            if p.lhs != n_star and n_star in p.rhs and depth[n_star] - depth[p.lhs] >= 1:
                w = child[(inst2, p.rhs.index(n_star))]
                break
        if w is None:
            raise DecodeFailed('no introducing production for {}'.format(n_star))
        logger.debug('repairing detached cycle through {}'.format(n_star))
        swap(c, w)

    def build(inst):
        p = prods[instances[inst]]
        return p, [build(child[(inst, j)]) for j in range(len(p.rhs))]

    return build(root)
