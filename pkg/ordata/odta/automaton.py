import math
from dataclasses import dataclass, field

from ordata import DEFAULT_SEED, DEFAULT_SOLVER_BUDGET, MAX_MATERIALIZED_ALPHABET, MAX_ZONAL_SYMBOLS
from ordata.automata.nfa import PredicateNfa, star_automaton
from ordata.automata.transducer import TreeTransducer
from ordata.automata.tree_automaton import UnrankedTreeAutomaton
from ordata.common.errors import OrdataError
from ordata.common.utils import canonical_sorted, nonempty_subsets
from ordata.core.profiles import ALL_PROFILES, ProfileTriple
from ordata.core.values import ROOT
from ordata.presburger.formula import free_keys


def _check_value_automaton(m, gamma):
    if isinstance(m, PredicateNfa):
        return
    for s in m.alphabet:
        if not isinstance(s, frozenset) or not s:
            raise OrdataError('value automaton symbol {!r} is not a nonempty set'.format(s))
        if not s <= gamma:
            raise OrdataError('value automaton symbol {} uses symbols outside the output alphabet'.format(
                sorted(map(str, s))))


@dataclass(frozen=True, eq=False)
class WeakODTA(object):
    """
    ⟨T, M, Γ₀⟩: a tree t is accepted if T outputs some t′ on t such that M accepts
    the string representation of t′ and the Γ₀-labeled nodes of t′ carry pairwise
    distinct values.
    """

    transducer: TreeTransducer
    value_automaton: object
    gamma0: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'gamma0', frozenset(self.gamma0))
        if not self.gamma0 <= self.gamma:
            raise OrdataError('distinctness set {} is not part of the output alphabet'.format(
                canonical_sorted(self.gamma0 - self.gamma)))
        _check_value_automaton(self.value_automaton, self.gamma)

    @property
    def gamma(self):
        return frozenset(self.transducer.output_alphabet)

    @property
    def sigma(self):
        return tuple(self.transducer.input_alphabet)

    @property
    def profiled(self):
        return False


def profile_alphabet(sigma):
    """ Σ × profile triples, profile-major per symbol. """
    return tuple((a, p) for a in sigma for p in ALL_PROFILES)


@dataclass(frozen=True, eq=False)
class ODTA(WeakODTA):
    """ Like a weak ODTA, but the transducer reads the profile tree (a, (left, parent, right)). """

    def __post_init__(self):
        super().__post_init__()
        labels = self.transducer.input_alphabet
        for lab in labels:
            if not (isinstance(lab, tuple) and len(lab) == 2 and isinstance(lab[1], ProfileTriple)):
                raise OrdataError('ODTA input symbol {!r} is not a (label, profile) pair'.format(lab))
        if set(labels) != set(profile_alphabet(self.sigma)):
            raise OrdataError('ODTA input alphabet must be the full product of labels and profiles')

    @property
    def sigma(self):
        return tuple(dict.fromkeys(lab[0] for lab in self.transducer.input_alphabet))

    @property
    def profiled(self):
        return True


@dataclass(frozen=True, eq=False)
class ExtendedWeakODTA(object):
    """
    Weak ODTA with a Presburger constraint ξ over output label counts x_α = sym(α)
    and class counts x_S = cls(S).
    """

    base: WeakODTA
    constraint: object

    def __post_init__(self):
        gamma = self.base.gamma
        for k in free_keys(self.constraint):
            if k.kind == 'sym' and k.name in gamma:
                continue
            if k.kind == 'cls' and k.name and k.name <= gamma:
                continue
            raise OrdataError('constraint variable {} is neither an output count nor a class count'.format(k.render()))

    @property
    def gamma(self):
        return self.base.gamma

    @property
    def sigma(self):
        return self.base.sigma

    @property
    def profiled(self):
        return self.base.profiled


@dataclass(frozen=True, eq=False)
class ZonalODTA(object):
    """ ⟨T, M′, Γ₀⟩ with M′ reading the zonal string representation of the output. """

    transducer: TreeTransducer
    zonal_automaton: object
    gamma0: frozenset = frozenset()
    profiled: bool = True

    @property
    def gamma(self):
        return frozenset(self.transducer.output_alphabet)

    @property
    def sigma(self):
        labels = self.transducer.input_alphabet
        if self.profiled:
            return tuple(dict.fromkeys(lab[0] for lab in labels))
        return tuple(labels)


@dataclass(frozen=True, eq=False)
class StringWeakODTA(object):
    """
    Weak ODTA over string data: the value automaton is an unranked tree automaton
    over nonempty subsets of Γ plus ROOT, run on the prefix-tree representation of
    the output's values.
    """

    transducer: TreeTransducer
    value_tree_automaton: UnrankedTreeAutomaton
    gamma0: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'gamma0', frozenset(self.gamma0))
        if not self.gamma0 <= self.gamma:
            raise OrdataError('distinctness set is not part of the output alphabet')
        for s in self.value_tree_automaton.alphabet:
            if s == ROOT:
                continue
            if not isinstance(s, frozenset) or not s or not s <= self.gamma:
                raise OrdataError('value tree symbol {!r} is not a nonempty subset of the output alphabet'.format(s))

    @property
    def gamma(self):
        return frozenset(self.transducer.output_alphabet)

    @property
    def sigma(self):
        return tuple(self.transducer.input_alphabet)


def lift_weak(s):
    """ The ODTA that ignores profiles and otherwise behaves like the weak ODTA `s`. """
    tr = s.transducer
    base = tr.base
    horizontal = []
    for (q, a), h in base.horizontal:
        for p in ALL_PROFILES:
            horizontal.append(((q, (a, p)), h))
    lifted = UnrankedTreeAutomaton(base.states, profile_alphabet(base.alphabet), tuple(horizontal), base.final)
    outputs = frozenset((q, (a, p), b) for q, a, b in tr.outputs for p in ALL_PROFILES)
    return ODTA(TreeTransducer(lifted, tr.output_alphabet, outputs), s.value_automaton, s.gamma0)


def all_subsets_automaton(gamma, name='s'):
    """ (2^Γ ∖ {∅})*, materialized while Γ is small. """
    gamma = canonical_sorted(gamma)
    if len(gamma) > MAX_MATERIALIZED_ALPHABET:
        return PredicateNfa(lambda s: bool(s) and s <= frozenset(gamma), '(2^Γ∖∅)*')
    return star_automaton(nonempty_subsets(gamma), name=name)


class _Unknown(object):
    """ Verdict of a membership search that ran out of budget. Not a boolean. """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        raise TypeError('UNKNOWN has no truth value, compare with `is UNKNOWN`')

    def __repr__(self):
        return 'UNKNOWN'


UNKNOWN = _Unknown()


@dataclass(frozen=True)
class EmptinessCaps(object):
    """
    Search bounds of the emptiness procedures.

    Parameters
    ----------
    max_nodes: int
        largest tree shape tried by brute force
    max_values: int
        largest data value used by brute force
    max_class_size: int
        largest number of zone label sets in the pattern of one guessed constant
    zone_cap: int
        largest number N of zones the guessed constants must occupy
    constant_cap: int
        largest number of guessed constants per bundle
    degree_cap: int
        largest number of neighbouring free zones of a free zone
    solver_budget: int
        search nodes per solver call
    max_zonal_symbols: int
        bound on the materialized zonal alphabet
    max_bundles: int
        bound on the number of guess bundles tried
    max_states: int
        bound on the states of one zone-tracking automaton
    seed: int
        recorded for reproducibility; tie-breaking is deterministic
    """

    max_nodes: int = 4
    max_values: int = 4
    max_class_size: int = 4
    zone_cap: int = 4
    constant_cap: int = 2
    degree_cap: int = 2
    solver_budget: int = DEFAULT_SOLVER_BUDGET
    max_zonal_symbols: int = MAX_ZONAL_SYMBOLS
    max_bundles: int = 64
    max_states: int = 20000
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for name in ('max_nodes', 'max_values', 'max_class_size', 'zone_cap', 'solver_budget',
                     'max_zonal_symbols', 'max_bundles', 'max_states'):
            assert getattr(self, name) > 0, '{} must be positive'.format(name)
        for name in ('constant_cap', 'degree_cap'):
            assert getattr(self, name) >= 0, '{} must not be negative'.format(name)

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def k_parameter(s):
    """ K = 27·|Σ|·|Q|·|Γ|. """
    return 27 * len(s.sigma) * len(s.transducer.states) * len(s.gamma)


def theoretical_bounds(k):
    """
    Size of the published guess bounds for parameter K: K^(K³) and
    2·K^(K³)·2^K + 2·K^(K³) + 1, reported by their decimal digit counts (exact values
    when they are small).
    """
    log_power = k ** 3 * math.log10(k) if k > 1 else 0.0
    out = {'K': k}
    if log_power < 60:
        power = k ** (k ** 3)
        threshold = 2 * power * 2 ** k + 2 * power + 1
        out.update(power=power, threshold=threshold, power_digits=len(str(power)),
                   threshold_digits=len(str(threshold)))
    else:
        out.update(power=None, threshold=None, power_digits=int(log_power) + 1,
                   threshold_digits=int(log_power + (k + 1) * math.log10(2)) + 1)
    return out


@dataclass(frozen=True)
class GuessBundle(object):
    """
    One guess of the ODTA emptiness search.

    patterns: the zonal patterns P whose classes all carry guessed constants;
    counts[P] = M_P and pools[P] = C_P. pool_d = D, constants sharing their pattern
    P_d = d_sets[d] with unconstrained classes. Constants are ints. n = N zones at
    least occupied by constants, n_prime = N′ of them Γ₀-labeled. degree bounds the
    free neighbours of every free zone.
    """

    patterns: tuple
    counts: dict
    pools: dict
    n: int
    n_prime: int
    pool_d: tuple = ()
    d_sets: dict = field(default_factory=dict)
    degree: int = 0

    def __post_init__(self):
        assert self.n_prime <= self.n, 'more Γ₀ zones than distinguished zones'
        for p in self.patterns:
            assert len(self.pools[p]) == self.counts[p], 'constant pool size differs from its count'

    def constants(self):
        """ (constant, pattern) pairs, constants ascending. """
        out = [(c, p) for p in self.patterns for c in self.pools[p]]
        out.extend((d, self.d_sets[d]) for d in self.pool_d)
        return sorted(out, key=lambda e: e[0])

    def pattern_of(self, c):
        return dict(self.constants())[c]

    def size(self):
        k = len(self.constants())
        return k + self.degree, k, self.n, len(self.pool_d)


NONEMPTY = 'nonempty'
EMPTY = 'empty'
EMPTY_WITHIN_CAPS = 'empty-within-caps'


@dataclass
class EmptinessVerdict(object):
    """ NONEMPTY(witness, certificate) | EMPTY | EMPTY_WITHIN_CAPS(report). """

    kind: str
    witness: object = None
    certificate: dict = None
    report: dict = field(default_factory=dict)

    @classmethod
    def nonempty(cls, witness, certificate, report=None):
        return cls(NONEMPTY, witness, certificate, report or {})

    @classmethod
    def empty(cls, report=None):
        return cls(EMPTY, None, None, report or {})

    @classmethod
    def within_caps(cls, report=None):
        return cls(EMPTY_WITHIN_CAPS, None, None, report or {})

    @property
    def is_nonempty(self):
        return self.kind == NONEMPTY

    @property
    def is_empty(self):
        return self.kind == EMPTY

    def __repr__(self):
        return 'EmptinessVerdict({})'.format(self.kind)

