import logging

from ordata import MAX_ZONAL_SYMBOLS
from ordata.automata.nfa import Nfa, PredicateNfa
from ordata.common.errors import CapExceeded
from ordata.common.utils import canonical_sorted, nonempty_subsets
from ordata.odta.automaton import ZonalODTA

logger = logging.getLogger(__name__)

# covers are enumerated over the nonempty subsets of a class, at most 2^20 candidates
MAX_COVER_BASE = 20


def covers(s, limit=MAX_ZONAL_SYMBOLS):
    """
    Sets P of nonempty subsets of `s` with ∪P = s, smallest first.

    >>> len(covers(frozenset('ab')))
    5
    """
    parts = nonempty_subsets(s)
    if len(parts) > MAX_COVER_BASE:
        raise CapExceeded('zonal alphabet', limit, 'class {} has too many zone patterns'.format(sorted(map(str, s))))
    out = []
    for mask in range(1, 2 ** len(parts)):
        chosen = [parts[i] for i in range(len(parts)) if mask >> i & 1]
        if frozenset().union(*chosen) != s:
            continue
        out.append(frozenset(chosen))
        if len(out) > limit:
            raise CapExceeded('zonal alphabet', limit)
    return canonical_sorted(out)


def zonal_convert(s, max_symbols=MAX_ZONAL_SYMBOLS):
    """
    The zonal ODTA equivalent to `s`.

    Every transition (q, S, q′) of the value automaton becomes the transitions
    (q, P, q′) for the covers P of S: the zone label sets of one value always union
    to the label set of its class.

    Parameters
    ----------
    s: WeakODTA or ODTA
        automaton to convert, its value automaton must be materialized
    max_symbols: int
        bound on the number of zonal symbols

    Returns
    -------
        ZonalODTA with the same transducer and Γ₀
    """
    m = s.value_automaton
    if isinstance(m, PredicateNfa):
        raise CapExceeded('zonal alphabet', max_symbols, 'value automaton {} is not materialized'.format(
            m.description))

    table = {}
    alphabet = []
    for sym in canonical_sorted(m.alphabet):
        table[sym] = covers(sym, max_symbols)
        alphabet.extend(table[sym])
        if len(alphabet) > max_symbols:
            raise CapExceeded('zonal alphabet', max_symbols)

    trans = frozenset((p, c, q) for p, sym, q in m.transitions for c in table[sym])
    logger.debug('zonal automaton: {} symbols, {} transitions'.format(len(alphabet), len(trans)))
    zonal = Nfa(m.states, tuple(dict.fromkeys(alphabet)), trans, m.initial, m.final)
    return ZonalODTA(s.transducer, zonal, s.gamma0, profiled=s.profiled)
