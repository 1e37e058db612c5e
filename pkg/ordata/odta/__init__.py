import logging

from ordata.odta.automaton import WeakODTA, ODTA, ExtendedWeakODTA, ZonalODTA, StringWeakODTA, EmptinessCaps, \
    EmptinessVerdict, GuessBundle, UNKNOWN, NONEMPTY, EMPTY, EMPTY_WITHIN_CAPS, lift_weak, all_subsets_automaton, \
    k_parameter, theoretical_bounds
from ordata.odta.membership import member, member_weak, member_odta, member_extended, member_zonal, \
    member_string_weak
from ordata.odta.closure import odta_union, odta_intersect
from ordata.odta.zonal import zonal_convert
from ordata.odta.weak_emptiness import empty_weak, empty_weak_ext, empty_string_weak, extended_automaton
from ordata.odta.emptiness import empty_odta
from ordata.odta.brute_force import brute_force_search
from ordata.odta.formats import parse_bundle, serialize_bundle, load_bundle, write_bundle

logger = logging.getLogger(__name__)


def empty(s, caps=None, **kwargs):
    """ Runs the emptiness procedure matching the type of `s`. """
    if isinstance(s, ExtendedWeakODTA):
        return empty_weak_ext(s, caps, **kwargs)
    if isinstance(s, StringWeakODTA):
        return empty_string_weak(s, caps, **kwargs)
    if isinstance(s, ODTA):
        return empty_odta(s, caps, **kwargs)
    if isinstance(s, WeakODTA):
        return empty_weak(s, caps, **kwargs)
    raise TypeError('no emptiness procedure for {}'.format(type(s).__name__))
