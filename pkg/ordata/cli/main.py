"""
`ordata` command line.

Exit codes: 0 member / nonempty / sat, 1 non-member / empty / unsat,
2 unknown / empty within caps, 3 errors (with the error kind in the report).
"""
import argparse
import logging
import os
import sys

from tabulate import tabulate

from ordata import DEFAULT_MEMBER_BUDGET, DEFAULT_SEED, DEFAULT_SOLVER_BUDGET, report_path
from ordata.automata.formats import parse_automaton, render_label
from ordata.cli.generate import instances
from ordata.cli.report import RunReport
from ordata.common.errors import OrdataError, ParseError
from ordata.common.utils import canonical_sorted, create_dir, render_symbol
from ordata.core.formats import parse_tree, serialize_tree
from ordata.core.profiles import profile
from ordata.core.trees import LabeledTree, OrderedDataTree
from ordata.core.values import string_representation, value_classes
from ordata.core.zones import zones
from ordata.frontends.dtd import dtd_sat
from ordata.frontends.formats import parse_constraints, parse_dtd
from ordata.frontends.setlinear import setlinear_to_odta
from ordata.odta import empty
from ordata.odta.automaton import EMPTY, NONEMPTY, UNKNOWN, EmptinessCaps
from ordata.odta.formats import parse_bundle, serialize_bundle
from ordata.odta.membership import member

logger = logging.getLogger(__name__)

CAPS = EmptinessCaps()


def _read(path):
    with open(path) as f:
        return f.read()


def _data_tree(path):
    t = parse_tree(_read(path))
    if not isinstance(t, OrderedDataTree):
        raise ParseError('{} holds a tree without data values'.format(path))
    return t


def _caps(args):
    return EmptinessCaps(max_nodes=args.max_nodes, max_values=args.max_values, zone_cap=args.zone_cap,
                         constant_cap=args.constant_cap, degree_cap=args.degree_cap, max_bundles=args.max_bundles,
                         solver_budget=args.solver_budget, seed=args.seed)


def _write_witness(args, t):
    if args.out:
        directory = os.path.dirname(args.out)
        if directory:
            create_dir(directory)
        with open(args.out, 'w') as f:
            f.write(serialize_tree(t) + '\n')
        logger.info('witness written to {}'.format(args.out))


def cmd_profile(args):
    t = _data_tree(args.tree)
    pt = profile(t)
    print(serialize_tree(LabeledTree(tuple(render_label(lab) for lab in pt.labels), pt.children)))
    return RunReport('profile', stats={'nodes': len(t)})


def cmd_strrep(args):
    t = _data_tree(args.tree)
    word = string_representation(t)
    print(''.join(render_symbol(s) for s in word))
    return RunReport('strrep', stats={'length': len(word)})


def cmd_zones(args):
    t = _data_tree(args.tree)
    part = zones(t)
    rows = [[z.id, ' '.join(str(u) for u in z.nodes), z.value, render_symbol(z.labels), z.outdegree]
            for z in part.zones]
    print(tabulate(rows, headers=['zone', 'nodes', 'value', 'labels', 'outdegree']))
    return RunReport('zones', stats={'zones': len(part)})


def cmd_classes(args):
    t = _data_tree(args.tree)
    classes = value_classes(t)
    rows = [[render_symbol(s), ' '.join(str(v) for v in sorted(classes[s]))] for s in canonical_sorted(classes)]
    print(tabulate(rows, headers=['labels', 'values']))
    return RunReport('classes', stats={'classes': len(classes)})


def cmd_member(args):
    s = parse_bundle(_read(args.odta))
    t = _data_tree(args.tree)
    verdict = member(s, t, args.budget)
    stats = {'budget': args.budget}
    if verdict is UNKNOWN:
        return RunReport('member', 'unknown', stats=stats)
    if verdict:
        return RunReport('member', 'member', witness=t, stats=stats)
    return RunReport('member', 'non-member', stats=stats)


def _emptiness_report(command, verdict, caps, args, names=('nonempty', 'empty', 'empty-within-caps')):
    stats = {k: v for k, v in verdict.report.items() if not isinstance(v, (dict, list, tuple))}
    if verdict.kind == NONEMPTY:
        _write_witness(args, verdict.witness)
        return RunReport(command, names[0], verdict.witness, caps.as_dict(), stats, args.seed)
    name = names[1] if verdict.kind == EMPTY else names[2]
    return RunReport(command, name, None, caps.as_dict(), stats, args.seed)


def cmd_empty(args):
    s = parse_bundle(_read(args.odta))
    caps = _caps(args)
    return _emptiness_report('empty', empty(s, caps), caps, args)


def cmd_dtdsat(args):
    d = parse_dtd(_read(args.dtd))
    constraints = parse_constraints(_read(args.constraints))
    caps = _caps(args)
    verdict = dtd_sat(d, constraints, caps)
    if verdict.is_sat:
        _write_witness(args, verdict.witness)
        return RunReport('dtdsat', 'sat', verdict.witness, caps.as_dict(), verdict.report, args.seed)
    return RunReport('dtdsat', verdict.status, None, caps.as_dict(), verdict.report, args.seed)


def cmd_setlin(args):
    a = parse_automaton(_read(args.automaton))
    constraints = parse_constraints(_read(args.constraints))
    caps = _caps(args)
    verdict = empty(setlinear_to_odta(a, constraints), caps)
    return _emptiness_report('setlin', verdict, caps, args, names=('sat', 'unsat', 'unknown'))


def cmd_gen(args):
    """ Writes `count` instances to --out (numbered when count > 1) or to stdout. """
    write = serialize_tree if args.kind == 'tree' else serialize_bundle
    texts = [write(x) for x in instances(args.kind, args.size, args.seed, args.count)]
    if not args.out:
        for text in texts:
            sys.stdout.write(text if text.endswith('\n') else text + '\n')
    else:
        root, ext = os.path.splitext(args.out)
        directory = os.path.dirname(args.out)
        if directory:
            create_dir(directory)
        for i, text in enumerate(texts):
            path = args.out if args.count == 1 else '{}_{}{}'.format(root, i, ext)
            with open(path, 'w') as f:
                f.write(text if text.endswith('\n') else text + '\n')
        logger.info('wrote {} {} instance(s) under {}'.format(len(texts), args.kind, directory or '.'))
    return RunReport('gen', stats={'kind': args.kind, 'count': args.count}, seed=args.seed)


def build_parser():
    parser = argparse.ArgumentParser(prog='ordata', description='ordered-data tree automata toolkit')
    parser.add_argument('--format', choices=['text', 'record'], default='text', help='report format')
    parser.add_argument('--report', default=None,
                        help='append reports to this file instead of stdout; `default` uses {}'.format(report_path))
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--solver-budget', type=int, default=DEFAULT_SOLVER_BUDGET)
    parser.add_argument('--max-nodes', type=int, default=CAPS.max_nodes,
                        help='largest tree shape tried by brute force (default %(default)s)')
    parser.add_argument('--max-values', type=int, default=CAPS.max_values,
                        help='largest data value tried by brute force (default %(default)s)')
    parser.add_argument('--zone-cap', type=int, default=CAPS.zone_cap,
                        help='zones the guessed constants of one bundle may occupy (default %(default)s)')
    parser.add_argument('--constant-cap', type=int, default=CAPS.constant_cap,
                        help='guessed constants per bundle (default %(default)s)')
    parser.add_argument('--degree-cap', type=int, default=CAPS.degree_cap,
                        help='free neighbours of a zone without a constant (default %(default)s)')
    parser.add_argument('--max-bundles', type=int, default=CAPS.max_bundles,
                        help='guess bundles tried before giving up (default %(default)s)')
    parser.add_argument('--out', default=None, help='witness or instance file')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, fn in [('profile', cmd_profile), ('strrep', cmd_strrep), ('zones', cmd_zones), ('classes', cmd_classes)]:
        p = sub.add_parser(name)
        p.add_argument('tree')
        p.set_defaults(fn=fn)

    p = sub.add_parser('member')
    p.add_argument('odta')
    p.add_argument('tree')
    p.add_argument('--budget', type=int, default=DEFAULT_MEMBER_BUDGET,
                   help='steps of the output search before answering unknown (default %(default)s)')
    p.set_defaults(fn=cmd_member)

    p = sub.add_parser('empty')
    p.add_argument('odta')
    p.set_defaults(fn=cmd_empty)

    p = sub.add_parser('dtdsat')
    p.add_argument('dtd')
    p.add_argument('constraints')
    p.set_defaults(fn=cmd_dtdsat)

    p = sub.add_parser('setlin')
    p.add_argument('automaton')
    p.add_argument('constraints')
    p.set_defaults(fn=cmd_setlin)

    p = sub.add_parser('gen')
    p.add_argument('kind', choices=['tree', 'weak', 'odta'])
    p.add_argument('size', type=int)
    p.add_argument('--count', type=int, default=1)
    p.set_defaults(fn=cmd_gen)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    path = args.report
    if path == 'default':
        create_dir(report_path)
        path = os.path.join(report_path, 'runs.log')

    try:
        report = args.fn(args)
    except (OrdataError, OSError) as e:
        kind = getattr(e, 'kind', 'IO_ERROR')
        message = getattr(e, 'message', str(e))
        logger.error('{}: {}'.format(kind, message))
        report = RunReport(args.command, 'error', stats={'error': kind, 'message': message})
    report.emit(path, args.format)
    return report.exit_code


if __name__ == '__main__':
    sys.exit(main())
