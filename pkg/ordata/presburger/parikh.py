import logging

from ordata import DEFAULT_SOLVER_BUDGET
from ordata.automata.nfa import PredicateNfa, nfa_member
from ordata.automata.tree_automaton import check_run
from ordata.common.errors import CapExceeded, DecodeFailed
from ordata.common.utils import canonical_sorted
from ordata.core.trees import LabeledTree
from ordata.presburger.formula import Assignment, aux, combine, disj, eq, exists, minus, run_key, sym
from ordata.presburger.grammar import START, Grammar, Production, derive, encode

logger = logging.getLogger(__name__)


def _word_grammar(m, key, prefix):
    if isinstance(m, PredicateNfa):
        raise CapExceeded('alphabet', 'materialization', 'Parikh formula needs an explicit value automaton')
    prods = []
    for q in canonical_sorted(m.initial):
        prods.append(Production(START, (('Q', q),), (), ('start', q)))
    for p, a, q in canonical_sorted(m.transitions):
        prods.append(Production(('Q', p), (('Q', q),), (key(a),), ('step', a)))
    for q in canonical_sorted(m.final):
        prods.append(Production(('Q', q), (), (), ('end', q)))
    return Grammar(tuple(prods), prefix)


def parikh_formula_nfa(m, key=sym, prefix='w'):
    """
    Existential formula over the symbol counts `key(a)` whose solutions are exactly
    the Parikh images of L(m).

    Parameters
    ----------
    m: Nfa
        word automaton
    key: callable
        symbol -> VariableKey, sym by default
    prefix: str
        distinguishes the auxiliary variables of several encodings in one formula
    """
    g = _word_grammar(m, key, prefix)
    return encode(g, [key(a) for a in canonical_sorted(m.alphabet)])


def _tree_grammar(a, label_key, prefix):
    prods = []
    hid = {}
    for (q, lab), h in a.horizontal:
        hid.setdefault(id(h), (len(hid), h))

    for q in a.states:
        if q in a.final:
            prods.append(Production(START, (('T', q),), (), ('start', q)))
    for (q, lab), h in a.horizontal:
        i = hid[id(h)][0]
        for p0 in canonical_sorted(h.initial):
            prods.append(Production(('T', q), (('H', i, p0),), (label_key(lab), run_key(q, lab)), ('node', q, lab)))
    for i, h in sorted(hid.values(), key=lambda e: e[0]):
        for p in canonical_sorted(h.final):
            prods.append(Production(('H', i, p), (), (), ('hend',)))
        marks = getattr(h, 'mark_of', {})
        for p, r, p2 in canonical_sorted(h.transitions):
            emits = (marks[(p, r, p2)],) if (p, r, p2) in marks else ()
            prods.append(Production(('H', i, p), (('T', r), ('H', i, p2)), emits, ('child',)))
    return Grammar(tuple(prods), prefix)


def transition_mark_keys(a):
    """ Count keys carried by the marked horizontal transitions of `a`. """
    keys = set()
    for _, h in a.horizontal:
        keys.update(getattr(h, 'mark_of', {}).values())
    return keys


def parikh_formula_ta(a, label_key=sym, prefix='t'):
    """
    Existential formula over label counts `label_key(a)` and (state, label) counts
    run_key(q, a) whose solutions are exactly the Parikh images of accepted trees
    together with the state counts of their accepting runs. Marked horizontal
    transitions add their own count keys.
    """
    g = _tree_grammar(a, label_key, prefix)
    keys = [label_key(lab) for lab in a.alphabet] + [run_key(q, lab) for (q, lab), _ in a.horizontal]
    return encode(g, keys)


def _ensure_derivation(g, formula, assignment, fixed_keys, budget):
    """ Re-solves with the counts fixed when the assignment lacks the production counts. """
    if all(g.y(i) in assignment for i in range(len(g.productions))):
        return assignment
    from ordata.presburger.solver import SAT, solve

    pins = [eq({k: 1}, assignment[k]) for k in fixed_keys]
    result = solve(combine(formula, *pins), budget=budget)
    if result.status is not SAT:
        raise DecodeFailed('counts {} are not a Parikh image ({})'.format(
            Assignment({k: assignment[k] for k in fixed_keys}).render(), result.status.value))
    return result.assignment


def decode_word(m, v, key=sym, prefix='w', budget=DEFAULT_SOLVER_BUDGET):
    """ A word of L(m) whose symbol counts are those of the assignment `v`. """
    g = _word_grammar(m, key, prefix)
    formula = encode(g, [key(a) for a in canonical_sorted(m.alphabet)])
    fixed = [key(a) for a in canonical_sorted(m.alphabet)]
    v = _ensure_derivation(g, formula, v, fixed, budget)

    node = derive(g, v)
    word = []
    while True:
        prod, kids = node
        if prod.tag[0] == 'step':
            word.append(prod.tag[1])
        if not kids:
            break
        node = kids[0]

    word = tuple(word)
    if not nfa_member(m, word):
        raise DecodeFailed('decoded word is not accepted')
    for a in set(m.alphabet):
        if sum(1 for s in word if s == a) != v[key(a)]:
            raise DecodeFailed('decoded word has wrong count for {}'.format(a))
    return word


def decode_tree(a, v, label_key=sym, prefix='t', budget=DEFAULT_SOLVER_BUDGET, with_run=False):
    """ A tree of L(a) whose counts are those of the assignment `v`; optionally with its run. """
    g = _tree_grammar(a, label_key, prefix)
    keys = [label_key(lab) for lab in a.alphabet] + [run_key(q, lab) for (q, lab), _ in a.horizontal]
    formula = encode(g, keys)
    pinned = [k for k in keys if k.kind != 'run' or k in v]
    v = _ensure_derivation(g, formula, v, pinned, budget)

    start = derive(g, v)
    labels, states, children = [], [], []

    def visit_t(node):
        # node expands T_q with a ('node', q, a) production
        prod, kids = node
        _, q, lab = prod.tag
        u = len(labels)
        labels.append(lab)
        states.append(q)
        children.append([])
        h = kids[0]
        while True:
            hprod, hkids = h
            if hprod.tag[0] == 'hend':
                break
            children[u].append(visit_t(hkids[0]))
            h = hkids[1]
        return u

    visit_t(start[1][0])
    tree = LabeledTree(tuple(labels), tuple(tuple(c) for c in children))
    run = tuple(states)
    if not check_run(a, tree, run):
        raise DecodeFailed('decoded tree does not carry an accepting run')
    for lab in set(a.alphabet):
        if sum(1 for x in tree.labels if x == lab) != v[label_key(lab)]:
            raise DecodeFailed('decoded tree has wrong count for {}'.format(lab))
    if with_run:
        return tree, run
    return tree


def periodic_to_formula(p, key=sym, prefix='h'):
    """ Existential formula whose solutions are the vectors of the periodic union `p`. """
    branches = []
    hs = set()
    for t, (base, periods) in enumerate(p.tuples):
        parts = []
        for i, a in enumerate(p.alphabet):
            h = aux(prefix, t, i)
            hs.add(h)
            parts.append(eq(minus({key(a): 1}, {h: periods[i][i]}), base[i]))
        branches.append(combine(*parts).body)
    return exists(hs, disj(*branches))
