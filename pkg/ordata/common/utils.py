import errno
import itertools
import logging
import os

logger = logging.getLogger(__name__)


def env_default(name, fallback, cast=str):
    """ Reads environment variable `name`, falling back to `fallback` if unset or malformed. """
    raw = os.environ.get(name)
    if raw is None or raw == '':
        return fallback
    try:
        return cast(raw)
    except ValueError:
        logger.warning('ignoring malformed {}={!r}, using {}'.format(name, raw, fallback))
        return fallback


def create_dir(directory_path):
    if not os.path.isdir(directory_path):
        try:
            os.makedirs(directory_path)
            logger.info('Creating {}'.format(directory_path))
        except OSError as exc:
            if exc.errno == errno.EEXIST and os.path.isdir(directory_path):
                pass


def canonical_key(sym):
    """
    Total order over the symbol domains used in the toolkit: strings, ints,
    tuples of symbols and frozensets of symbols. Sets sort by size first, so
    {a} < {b} < {a,b}.
    """
    if isinstance(sym, frozenset):
        return (3, len(sym), tuple(sorted(canonical_key(s) for s in sym)))
    if isinstance(sym, tuple):
        return (2, len(sym), tuple(canonical_key(s) for s in sym))
    if isinstance(sym, bool) or sym is None:
        return (0, str(sym))
    if isinstance(sym, int):
        return (1, sym)
    return (0, str(sym))


def canonical_sorted(symbols):
    return sorted(symbols, key=canonical_key)


def render_symbol(sym):
    """ Renders a symbol for diagnostics and file formats: {a,b} for sets, a.b for tuples. """
    if isinstance(sym, frozenset):
        return '{' + ','.join(render_symbol(s) for s in canonical_sorted(sym)) + '}'
    if isinstance(sym, tuple):
        return '.'.join(render_symbol(s) for s in sym)
    return str(sym)


def nonempty_subsets(symbols):
    """ All nonempty subsets of `symbols` as frozensets, in canonical order. """
    symbols = canonical_sorted(set(symbols))
    subsets = []
    for k in range(1, len(symbols) + 1):
        for combo in itertools.combinations(symbols, k):
            subsets.append(frozenset(combo))
    return canonical_sorted(subsets)


def set_partitions(items):
    """ Yields every partition of `items` as a list of blocks (restricted growth order). """
    items = list(items)
    if not items:
        yield []
        return

    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]


def ordered_set_partitions(items):
    """ Yields every ordered partition (sequence of nonempty blocks) of `items`. """
    for partition in set_partitions(items):
        for order in itertools.permutations(partition):
            yield [list(b) for b in order]
