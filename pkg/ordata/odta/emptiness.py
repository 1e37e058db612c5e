"""
Emptiness for ODTA.

Every guess bundle fixes a set of constants with their zonal patterns and a bound
on the free neighbours of zones without a constant. The profiled extended-tree
automaton is refined by a zone-tracking automaton that assigns each zone a
constant or FREE, keeps the label set and free degree of the zone seen so far and
marks every closed zone with a count key. Together with the zonal automaton's
Parikh formula this gives an APC; a model is decoded into an extended tree, a
zonal word and data values, recoloring free zones apart where needed.
"""
import itertools
import logging
from collections import defaultdict, deque

from tqdm import tqdm

from ordata import DEFAULT_MEMBER_BUDGET
from ordata.automata.apc import Apc, apc_solve
from ordata.automata.nfa import CountingNfa, PredicateNfa, nfa_empty, reachable_states
from ordata.automata.tree_automaton import UnrankedTreeAutomaton, ta_empty
from ordata.common.errors import CapExceeded, DecodeFailed, PreconditionViolated, VerificationError, \
    WitnessUnverified
from ordata.common.utils import canonical_sorted
from ordata.core.data_graph import recolor_data_graph, required_values
from ordata.core.profiles import DIFF, ROOT_PROFILE, SAME, equalities_from_profile, profile
from ordata.core.trees import LabeledTree, OrderedDataTree
from ordata.core.zones import zonal_string_representation, zone_graph, zones_from_equalities
from ordata.odta.automaton import UNKNOWN, EmptinessVerdict, GuessBundle, k_parameter, theoretical_bounds
from ordata.odta.base import BaseProcedure
from ordata.odta.membership import member_odta
from ordata.odta.weak_emptiness import assign_values, ext_key, extended_automaton, label_constraints, \
    output_count_constraints
from ordata.odta.zonal import zonal_convert
from ordata.presburger.formula import aux, cls, combine, conj, disj, eq, exists, ge, minus, run_key, total, zone
from ordata.presburger.parikh import decode_word, parikh_formula_nfa, parikh_formula_ta, transition_mark_keys
from ordata.presburger.solver import SAT, UNSAT, solve

logger = logging.getLogger(__name__)

FREE = '-'


def zone_count_key(kappa, labels, degree):
    """ Count of closed zones with constant `kappa` (or FREE), label set `labels` and free degree `degree`. """
    return aux('zones', kappa, frozenset(labels), degree)


def gamma0_compatible(pattern, gamma0):
    """ No two zone label sets of `pattern` share a Γ₀ label. """
    seen = set()
    for s in pattern:
        marked = s & gamma0
        if marked & seen:
            return False
        seen |= marked
    return True


class ZoneTracker(object):
    """
    Horizontal bookkeeping of the zone-tracking automaton for one bundle.

    A node's tracking state is (e, kappa, labels, degree): e its state in the
    profiled extended automaton, kappa the constant of its zone or FREE, labels the
    output labels of its zone inside its subtree and degree the free zones adjacent
    to that part. Zones are closed where their top run of siblings ends, the root
    zone at the root.

    While reading the children of u, the scan state is (labels, degree, run): the
    zone of u seen so far and the sibling run being read, either None, ('open',
    kappa, labels, degree) or ('closed', kappa, right) where right tells whether the
    next sibling heads a run adjacent as a free zone.
    """

    def __init__(self, bundle, gamma0, degree):
        self.gamma0 = frozenset(gamma0)
        self.degree = degree
        self.patterns = dict(bundle.constants())
        self.kappas = (FREE,) + tuple(sorted(self.patterns))

    def start(self, beta):
        return frozenset([beta]), 0, None

    def result(self, scan):
        labels, degree, run = scan
        if run is None or run[0] == 'closed' and not run[2]:
            return labels, degree
        return None

    def root_ok(self, kappa, labels):
        return kappa == FREE or labels in self.patterns[kappa]

    def step(self, kappa, scan, child):
        """ Yields (next scan state, mark key or None) for reading `child` under a parent zone `kappa`. """
        acc_labels, acc_degree, run = scan
        (_, prof), kc, lc, dc = child
        free_parent = kappa == FREE

        if prof.parent == SAME:
            if kc != kappa or run is not None and (run[0] == 'open' or run[2]):
                return
            if lc & acc_labels & self.gamma0:
                return
            if acc_degree + dc > self.degree:
                return
            yield (acc_labels | lc, acc_degree + dc, None), None
            return
        if prof.parent != DIFF:
            return

        if prof.left == SAME:
            if run is None or run[0] != 'open' or run[1] != kc:
                return
            _, _, rl, rd = run
            if rl & lc & self.gamma0:
                return
            rl, rd = rl | lc, rd + dc
        else:
            if run is not None and run[0] == 'open':
                return
            if kc != FREE and kc == kappa:
                return
            both = free_parent and kc == FREE
            rl, rd = lc, dc + both
            if run is not None:
                _, prev, right = run
                if prev != FREE and prev == kc:
                    return
                if right != (prev == FREE and kc == FREE):
                    return
                rd += right
            acc_degree += both
            if acc_degree > self.degree:
                return
        if rd > self.degree:
            return

        if prof.right == SAME:
            yield (acc_labels, acc_degree, ('open', kc, rl, rd)), None
            return
        if kc != FREE and rl not in self.patterns[kc]:
            return
        rights = (False, True) if prof.right == DIFF and kc == FREE else (False,)
        for right in rights:
            if rd + right > self.degree:
                continue
            yield (acc_labels, acc_degree, ('closed', kc, right)), zone_count_key(kc, rl, rd + right)


def _trim(init, trans, final):
    """ States of a scan product that lie on a path from `init` to `final`. """
    back = defaultdict(set)
    for src, _, dst in trans:
        back[dst].add(src)
    useful = set(final)
    queue = deque(final)
    while queue:
        q = queue.popleft()
        for p in back[q]:
            if p not in useful:
                useful.add(p)
                queue.append(p)
    return useful


class ZoneTrackingBuilder(object):
    """ Builds the zone-tracking automaton over the profiled extended automaton `e`. """

    def __init__(self, e, tracker, max_states):
        self.e = e
        self.tracker = tracker
        self.max_states = max_states
        self.bodies = {}
        self.users = defaultdict(list)
        for (q, lab), h in e.horizontal:
            for kappa in tracker.kappas:
                self.bodies.setdefault((id(h), lab[2], kappa), (h, lab[2], kappa))
                self.users[(id(h), lab[2], kappa)].append(q)
        self.entries = defaultdict(list)
        for (q, lab), h in e.horizontal:
            self.entries[q].append((lab, h))

    def explore(self, h, beta, kappa, children):
        """ Reachable part of the scan product of `h` with the tracker, reading `children` (e -> states). """
        tracker = self.tracker
        init = [(p, tracker.start(beta)) for p in canonical_sorted(h.initial)]
        seen = set(init)
        queue = deque(init)
        trans = {}
        results = defaultdict(set)
        while queue:
            src = queue.popleft()
            p, scan = src
            if p in h.final:
                r = tracker.result(scan)
                if r is not None:
                    results[r].add(src)
            for e_c, p2 in h.outgoing.get(p, ()):
                for child in children.get(e_c, ()):
                    for scan2, mark in tracker.step(kappa, scan, child):
                        dst = (p2, scan2)
                        trans[(src, child, dst)] = mark
                        if dst not in seen:
                            seen.add(dst)
                            queue.append(dst)
                            if len(seen) > self.max_states:
                                raise CapExceeded('zone-tracking states', self.max_states)
        return init, trans, results

    def reachable(self):
        """ Tracking states some subtree reaches, with the scan products read over them. """
        states = set()
        while True:
            children = defaultdict(list)
            for s in canonical_sorted(states):
                children[s[0]].append(s)
            explored = {}
            new = set()
            for key, (h, beta, kappa) in self.bodies.items():
                explored[key] = self.explore(h, beta, kappa, children)
                for labels, degree in explored[key][2]:
                    for q in self.users[key]:
                        new.add((q, kappa, labels, degree))
            if new <= states:
                return states, explored
            states |= new
            if len(states) > self.max_states:
                raise CapExceeded('zone-tracking states', self.max_states)

    def build(self):
        """
        The zone-tracking automaton, restricted to states of accepted trees.

        Returns None when it accepts nothing.
        """
        tracker = self.tracker
        states, explored = self.reachable()
        final = {s for s in states
                 if s[0] in self.e.final and s[0][1] == ROOT_PROFILE and tracker.root_ok(s[1], s[2])}
        if not final:
            return None

        cache = {}
        horizontal = []
        useful = set(final)
        queue = deque(canonical_sorted(final))
        while queue:
            s = queue.popleft()
            q, kappa, labels, degree = s
            for lab, h in self.entries[q]:
                key = (id(h), lab[2], kappa, labels, degree)
                if key not in cache:
                    cache[key] = self._target_nfa(explored[(id(h), lab[2], kappa)], (labels, degree))
                nfa = cache[key]
                if nfa is None:
                    continue
                horizontal.append(((s, lab), nfa))
                for c in nfa.alphabet:
                    if c not in useful:
                        useful.add(c)
                        queue.append(c)

        alphabet = tuple(dict.fromkeys(lab for (_, lab), _ in horizontal))
        return UnrankedTreeAutomaton(tuple(canonical_sorted(useful)), alphabet, tuple(horizontal),
                                     frozenset(final))

    def _target_nfa(self, body, target):
        init, trans, results = body
        final = results.get(target)
        if not final:
            return None
        keep = _trim(init, trans, final)
        kept = [(t, mark) for t, mark in trans.items() if t[0] in keep and t[2] in keep]
        states = canonical_sorted(keep)
        alphabet = canonical_sorted({t[1] for t, _ in kept})
        marks = tuple((t, mark) for t, mark in kept if mark is not None)
        return CountingNfa(tuple(states), tuple(alphabet), frozenset(t for t, _ in kept),
                           frozenset(p for p in init if p in keep), frozenset(final), marks)


class OdtaEmptiness(BaseProcedure):

    def __init__(self, automaton, caps=None, member_budget=DEFAULT_MEMBER_BUDGET, **kwargs):
        """
        Emptiness of an ODTA by guess bundles and APC solving.

        Parameters
        ----------
        automaton: ODTA
            automaton to decide

        caps: EmptinessCaps
            constant_cap, max_class_size, zone_cap and degree_cap bound the guess
            bundles, max_bundles their number; max_states bounds each zone-tracking
            automaton and solver_budget each solve

        member_budget: int
            step budget of the membership re-check of a witness

        """
        super().__init__(automaton, kwargs.pop('alg_name', 'empty-odta'), caps=caps, **kwargs)
        assert automaton.profiled, 'empty_odta needs an ODTA'

        self.member_budget = member_budget
        self.gamma0 = automaton.gamma0

        # cleared whenever a cap or budget cuts part of the search
        self.closed = True
        self.threshold = 0
        self.stats = {'bundles': 0, 'infeasible_bundles': 0, 'tracking_states': 0, 'solver_calls': 0,
                      'solver_unknown': 0, 'unverified': 0}

    def run(self):
        self._start()
        s = self.automaton
        k = k_parameter(s)
        report = {'K': k, 'bounds': theoretical_bounds(k)}

        m = s.value_automaton
        if not isinstance(m, PredicateNfa) and nfa_empty(m):
            report['reason'] = 'value automaton accepts nothing'
            report['closed'] = True
            return self._finalize(EmptinessVerdict.empty(report))

        e = extended_automaton(s.transducer, profiled=True)
        if ta_empty(e):
            report['reason'] = 'no profile-consistent transducer run'
            report['closed'] = True
            return self._finalize(EmptinessVerdict.empty(report))

        try:
            self.zonal = zonal_convert(s, self.caps.max_zonal_symbols).zonal_automaton
            relaxed = self.relaxation(e)
        except CapExceeded as ex:
            report['reason'] = str(ex)
            return self._finalize(EmptinessVerdict.within_caps(report))

        self.stats['solver_calls'] += 1
        result = solve(relaxed, budget=self.caps.solver_budget, seed=self.caps.seed)
        if result.status is UNSAT:
            report['reason'] = 'no output tree meets the value automaton counts'
            report['closed'] = True
            return self._finalize(EmptinessVerdict.empty(report))

        self.zonal_formula = parikh_formula_nfa(self.zonal, key=zone, prefix='m')
        self.candidates = self.candidate_patterns()
        self.logger.debug('{} candidate constant patterns'.format(len(self.candidates)))

        for bundle in tqdm(self.bundles(), disable=not self.progress, desc='bundles'):
            if self.stats['bundles'] >= self.caps.max_bundles:
                self.closed = False
                break
            self.stats['bundles'] += 1
            found = self.try_bundle(e, bundle)
            if found is not None:
                witness, certificate = found
                report['threshold'] = self.threshold
                return self._finalize(EmptinessVerdict.nonempty(witness, certificate, report))

        report['threshold'] = self.threshold or self.caps.degree_cap * len(s.gamma) + self.caps.degree_cap + 1
        report['closed'] = self.closed
        report['reason'] = 'no witness within caps'
        return self._finalize(EmptinessVerdict.within_caps(report))

    def relaxation(self, e):
        """
        Output counts every member satisfies: the weak emptiness formula over the
        profiled extended automaton. Unsatisfiable means empty.
        """
        s = self.automaton
        symbols = canonical_sorted(s.value_automaton.alphabet)
        return combine(parikh_formula_ta(e, label_key=ext_key, prefix='t'),
                       parikh_formula_nfa(s.value_automaton, key=cls, prefix='m'),
                       output_count_constraints(e, s.gamma),
                       label_constraints(s.gamma, s.gamma0, symbols))

    def candidate_patterns(self):
        """ Zonal symbols on accepting paths that a single constant can carry. """
        m = self.zonal
        live = reachable_states(m) & _coreachable(m)
        used = {a for p, a, q in m.transitions if p in live and q in live}
        return [p for p in canonical_sorted(used)
                if gamma0_compatible(p, self.gamma0) and len(p) <= self.caps.max_class_size]

    def bundles(self):
        """
        Guess bundles by size: constants plus free degree first, then constants, the
        zones they occupy and the number of constants in D.
        """
        caps = self.caps
        for level in range(caps.constant_cap + caps.degree_cap + 1):
            for k in range(min(level, caps.constant_cap) + 1):
                degree = level - k
                if degree > caps.degree_cap:
                    continue
                combos = [c for c in itertools.combinations_with_replacement(self.candidates, k)
                          if sum(len(p) for p in c) <= caps.zone_cap]
                for combo in sorted(combos, key=lambda c: sum(len(p) for p in c)):
                    distinct = canonical_sorted(set(combo))
                    for open_mask in sorted(itertools.product((False, True), repeat=len(distinct)), key=sum):
                        yield self._bundle(combo, dict(zip(distinct, open_mask)), degree)

    def _bundle(self, combo, is_open, degree):
        pools, pool_d, d_sets = {}, [], {}
        for c, p in enumerate(combo):
            if is_open[p]:
                pool_d.append(c)
                d_sets[c] = p
            else:
                pools.setdefault(p, []).append(c)
        patterns = tuple(canonical_sorted(pools))
        return GuessBundle(patterns=patterns,
                           counts={p: len(pools[p]) for p in patterns},
                           pools={p: tuple(pools[p]) for p in patterns},
                           n=sum(len(p) for p in combo),
                           n_prime=sum(1 for p in combo for s in p if s & self.gamma0),
                           pool_d=tuple(pool_d),
                           d_sets=d_sets,
                           degree=degree)

    def constraint(self, a, bundle):
        """
        ξ for one bundle over the zonal counts z_P and the zone counts of `a`:
        patterns of C classes occur exactly M_P times, patterns of D constants at
        least |D_P| times; every constant covers each label set of its pattern once
        per Γ₀ label; free S-zones cover the free positions of the patterns holding
        S, one to one when S meets Γ₀; and when some free zone has d free neighbours
        every used pool holds at least d·|Φ| + d + 1 values.
        """
        gamma0 = self.gamma0
        patterns = canonical_sorted(self.zonal.alphabet)
        counts = defaultdict(dict)
        for key in transition_mark_keys(a):
            counts[key.name[1:]][key] = 1
        for (s, lab), _ in a.horizontal:
            if s in a.final:
                counts[(s[1], s[2], s[3])][run_key(s, lab)] = 1

        held = defaultdict(int)
        for c, p in bundle.constants():
            held[p] += 1
        parts = [self.zonal_formula]
        for p in patterns:
            if p in bundle.counts:
                parts.append(eq({zone(p): 1}, bundle.counts[p]))
            elif not gamma0_compatible(p, gamma0):
                parts.append(eq({zone(p): 1}, 0))
            elif held[p]:
                parts.append(ge({zone(p): 1}, held[p]))
        for c, p in bundle.constants():
            for s in canonical_sorted(p):
                zs = counts.get((c, s, 0), {})
                parts.append(eq(zs, 1) if s & gamma0 else ge(zs, 1))

        label_sets = canonical_sorted({s for p in patterns for s in p} |
                                      {s for kappa, s, _ in counts if kappa == FREE})
        flags = {s: aux('free', s) for s in label_sets}
        for s in label_sets:
            x = {}
            for (kappa, s2, _), keys in counts.items():
                if kappa == FREE and s2 == s:
                    x.update(keys)
            pool = total(zone(p) for p in patterns if s in p and p not in bundle.counts)
            n_s = sum(n for p, n in held.items() if s in p and p not in bundle.counts)
            spread = minus(x, pool)
            parts.append(eq(spread, -n_s) if s & gamma0 else ge(spread, -n_s))
            parts.append(disj(conj(eq(x, 0), eq({flags[s]: 1}, 0)), conj(ge(x, 1), eq({flags[s]: 1}, 1))))
            parts.append(disj(eq(x, 0), ge(pool, n_s + 1)))
            for d in range(1, bundle.degree + 1):
                higher = {}
                for (kappa, _, d2), keys in counts.items():
                    if kappa == FREE and d2 >= d:
                        higher.update(keys)
                if higher:
                    parts.append(disj(eq(higher, 0), eq(x, 0),
                                      ge(minus(pool, total(flags.values(), d)), n_s + d + 1)))
        return exists([zone(p) for p in patterns] + list(flags.values()), *parts)

    def try_bundle(self, e, bundle):
        tracker = ZoneTracker(bundle, self.gamma0, bundle.degree)
        try:
            a = ZoneTrackingBuilder(e, tracker, self.caps.max_states).build()
        except CapExceeded as ex:
            self.logger.debug('bundle {} skipped: {}'.format(bundle.size(), ex))
            self.closed = False
            return None
        if a is None:
            self.stats['infeasible_bundles'] += 1
            return None
        self.stats['tracking_states'] = max(self.stats['tracking_states'], len(a.states))

        self.stats['solver_calls'] += 1
        result, found = apc_solve(Apc(a, self.constraint(a, bundle)), budget=self.caps.solver_budget,
                                  seed=self.caps.seed)
        if result.status is UNSAT:
            self.stats['infeasible_bundles'] += 1
            return None
        if result.status is not SAT:
            self.stats['solver_unknown'] += 1
            self.closed = False
            return None

        try:
            return self.decode(found, result.assignment, bundle)
        except (DecodeFailed, PreconditionViolated, VerificationError) as ex:
            self.logger.warning('decoding bundle {} failed: {}'.format(bundle.size(), ex))
            self.closed = False
        except WitnessUnverified as ex:
            self.logger.warning('bundle {}: {}'.format(bundle.size(), ex))
            self.stats['unverified'] += 1
            self.closed = False
        return None

    def decode(self, found, v, bundle):
        tree, run = found
        word = decode_word(self.zonal, v, key=zone, prefix='m', budget=self.caps.solver_budget)

        pt = LabeledTree(tuple(lab[0] for lab in tree.labels), tree.children)
        outputs = tuple(lab[2] for lab in tree.labels)
        same = equalities_from_profile(pt)
        part = zones_from_equalities(pt, lambda u, v: same[(u, v)], labels=outputs)
        kappa_of = {}
        for u in pt.nodes():
            kappa_of.setdefault(part.zone_of[u], run[u][1])

        # constants take the first positions of their pattern, in constant order
        slots = defaultdict(list)
        for j, p in enumerate(word, 1):
            slots[p].append(j)
        value_of = {}
        for c, p in bundle.constants():
            if not slots[p]:
                raise DecodeFailed('pattern {} has no position left for constant {}'.format(sorted(p), c))
            value_of[c] = slots[p].pop(0)
        free_positions = sorted((j, p) for p, js in slots.items() for j in js)

        zone_value = {z: value_of[kappa] for z, kappa in kappa_of.items() if kappa != FREE}
        free = sorted(z for z, kappa in kappa_of.items() if kappa == FREE)
        if free:
            values = assign_values([part.zones[z].labels for z in free], free_positions)
            g = zone_graph(pt, part, members=free).with_values(values)
            g = recolor_data_graph(g, alphabet_size=len(set(g.labels)))
            self.threshold = required_values(g, len(set(g.labels)))
            for z, d in zip(free, g.values):
                zone_value[z] = d
        else:
            self.threshold = 1

        values = tuple(zone_value[part.zone_of[u]] for u in pt.nodes())
        witness = OrderedDataTree(tuple(lab[0] for lab in pt.labels), pt.children, values)
        out = OrderedDataTree(outputs, pt.children, values)
        self.verify(witness, out, pt, word)
        return witness, {'output': out, 'zonal_word': word, 'bundle': bundle, 'run': run}

    def verify(self, witness, out, pt, word):
        if profile(witness).labels != pt.labels:
            raise VerificationError('decoded values do not realize the guessed profiles')
        if zonal_string_representation(out) != tuple(word):
            raise VerificationError('decoded values do not realize the zonal word')
        verdict = member_odta(self.automaton, witness, self.member_budget)
        if verdict is UNKNOWN:
            raise WitnessUnverified('membership re-check of the witness ran out of budget')
        if not verdict:
            raise VerificationError('witness is rejected by membership')


def _coreachable(m):
    back = defaultdict(set)
    for p, _, q in m.transitions:
        back[q].add(p)
    seen = set(m.final)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for p in back[q]:
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def empty_odta(s, caps=None, **kwargs):
    """
    Emptiness of an ODTA within caps.

    Returns NONEMPTY with a verified witness, EMPTY when the transducer, the value
    automaton or the output count relaxation admits nothing, and EMPTY_WITHIN_CAPS
    otherwise. The verdict report holds K, the published guess bounds, the
    recoloring threshold actually used and whether every bundle within caps was
    decided.
    """
    return OdtaEmptiness(s, caps, **kwargs).run()
