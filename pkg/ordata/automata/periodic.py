from dataclasses import dataclass

from ordata.common.errors import DimensionMismatchError, OrdataError


@dataclass(frozen=True)
class PeriodicLanguageUnion(object):
    """
    Finite union of periodic languages over an alphabet of dimension ℓ.

    Each entry of `tuples` is (base, periods): `base` is an ℓ-vector and `periods[i]`
    is an i-base, nonzero at most in coordinate i. A vector belongs to the entry iff
    it equals base + Σ h_i·periods[i] for naturals h_i.
    """

    alphabet: tuple
    tuples: tuple

    def __post_init__(self):
        object.__setattr__(self, 'alphabet', tuple(self.alphabet))
        norm = []
        dim = len(self.alphabet)
        for base, periods in self.tuples:
            base, periods = tuple(base), tuple(tuple(p) for p in periods)
            if len(base) != dim or len(periods) != dim or any(len(p) != dim for p in periods):
                raise DimensionMismatchError('periodic tuple does not have dimension {}'.format(dim))
            for i, p in enumerate(periods):
                if any(c != 0 for j, c in enumerate(p) if j != i):
                    raise OrdataError('period {} is not a {}-base'.format(p, i))
            if any(c < 0 for c in base) or any(c < 0 for p in periods for c in p):
                raise OrdataError('periodic vectors range over naturals')
            norm.append((base, periods))
        object.__setattr__(self, 'tuples', tuple(norm))

    @property
    def dimension(self):
        return len(self.alphabet)


def periodic_contains(p, v):
    """ Membership of the Parikh vector `v`, by per-coordinate divisibility. """
    v = tuple(v)
    if len(v) != p.dimension:
        raise DimensionMismatchError('vector of dimension {} for a union of dimension {}'.format(len(v), p.dimension))

    for base, periods in p.tuples:
        ok = True
        for i, (vi, ui) in enumerate(zip(v, base)):
            diff, step = vi - ui, periods[i][i]
            if diff < 0 or (step == 0 and diff != 0) or (step > 0 and diff % step != 0):
                ok = False
                break
        if ok:
            return True
    return False
