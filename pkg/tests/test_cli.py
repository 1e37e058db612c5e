import json
import os

import pytest

from ordata.automata.formats import serialize_automaton
from ordata.automata.tree_automaton import all_trees_automaton
from ordata.cli.main import main
from ordata.core.formats import parse_tree, serialize_tree
from ordata.odta.fixtures import all_accepting, class_count_odta, increasing_chain, never_accepting, \
    two_comparable_weak
from ordata.odta.formats import serialize_bundle
from ordata.odta.membership import member


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text if text.endswith('\n') else text + '\n')
    return str(path)


def records(path):
    with open(path) as f:
        return [json.loads(line) for line in f if line.strip()]


@pytest.fixture
def weak_file(tmp_path):
    return write(tmp_path, 'two.odta', serialize_bundle(two_comparable_weak()))


def test_member_exit_codes(tmp_path, weak_file):
    chain = write(tmp_path, 'chain.tree', '(a@5 (a@5))')
    rising = write(tmp_path, 'rising.tree', serialize_tree(increasing_chain(3)))
    assert main(['member', weak_file, chain]) == 0
    assert main(['member', weak_file, rising]) == 1


def test_member_record_report(tmp_path, weak_file):
    chain = write(tmp_path, 'chain.tree', '(a@5 (a@5))')
    report = str(tmp_path / 'reports' / 'runs.log')
    assert main(['--format', 'record', '--report', report, 'member', weak_file, chain]) == 0
    assert main(['--format', 'record', '--report', report, 'member', weak_file, chain]) == 0
    rows = records(report)
    assert len(rows) == 2
    assert rows[0]['command'] == 'member' and rows[0]['verdict'] == 'member'
    assert parse_tree(rows[0]['witness']) == parse_tree('(a@5 (a@5))')


def test_empty_writes_witness(tmp_path):
    bundle = write(tmp_path, 'all.odta', serialize_bundle(all_accepting(('a', 'b'))))
    out = str(tmp_path / 'witnesses' / 'w.tree')
    assert main(['--out', out, 'empty', bundle]) == 0
    with open(out) as f:
        witness = parse_tree(f.read())
    assert member(all_accepting(('a', 'b')), witness) is True


def test_empty_verdicts(tmp_path):
    never = write(tmp_path, 'never.odta', serialize_bundle(never_accepting(('a',))))
    assert main(['empty', never]) == 1
    five = write(tmp_path, 'five.odta', serialize_bundle(class_count_odta(('a',), 'a', 5)))
    report = str(tmp_path / 'runs.log')
    code = main(['--format', 'record', '--report', report, '--max-nodes', '3', '--constant-cap', '0',
                 '--degree-cap', '1', 'empty', five])
    assert code == 2
    row = records(report)[0]
    assert row['verdict'] == 'empty-within-caps'
    assert row['cap.max_nodes'] == 3
    assert row['cap.degree_cap'] == 1


def test_empty_finds_witnesses_beyond_max_nodes(tmp_path):
    five = write(tmp_path, 'five.odta', serialize_bundle(class_count_odta(('a',), 'a', 5)))
    out = str(tmp_path / 'w.tree')
    assert main(['--max-nodes', '2', '--out', out, 'empty', five]) == 0
    with open(out) as f:
        witness = parse_tree(f.read())
    assert len(set(witness.values)) == 5


def test_member_budget(tmp_path, weak_file):
    chain = write(tmp_path, 'chain.tree', '(a@5 (a@5))')
    report = str(tmp_path / 'runs.log')
    assert main(['--format', 'record', '--report', report, 'member', '--budget', '1', weak_file, chain]) == 2
    row = records(report)[0]
    assert row['verdict'] == 'unknown'
    assert row['budget'] == 1
    assert main(['member', '--budget', '1000', weak_file, chain]) == 0


def test_help_documents_caps(capsys):
    with pytest.raises(SystemExit):
        main(['--help'])
    text = ' '.join(capsys.readouterr().out.split())
    assert 'brute force (default 4)' in text
    assert '--degree-cap' in text and '--max-bundles' in text


def test_dtdsat(tmp_path):
    dtd = write(tmp_path, 'pair.dtd', 'root: doc\ndoc -> item item note\n')
    constraints = write(tmp_path, 'c.txt', 'key(item)\nincl(item, note)\n')
    assert main(['dtdsat', dtd, constraints]) == 1
    loose = write(tmp_path, 'loose.txt', 'incl(item, note)\n')
    assert main(['dtdsat', dtd, loose]) == 0


def test_setlin(tmp_path):
    a = write(tmp_path, 'all.ta', serialize_automaton(all_trees_automaton(('a', 'b'))))
    sat = write(tmp_path, 'sat.txt', 'set: V(a) & V(b) != empty\nlin: x_a >= 2\n')
    unsat = write(tmp_path, 'unsat.txt', 'set: V(a) = empty\nlin: x_a >= 1\n')
    assert main(['setlin', a, sat]) == 0
    assert main(['setlin', a, unsat]) == 1


def test_malformed_input(tmp_path):
    bad = write(tmp_path, 'bad.odta', '[kind]\nsideways\n')
    report = str(tmp_path / 'runs.log')
    assert main(['--format', 'record', '--report', report, 'empty', bad]) == 3
    row = records(report)[0]
    assert row['verdict'] == 'error' and row['error'] == 'PARSE_ERROR'


def test_missing_file(tmp_path):
    assert main(['profile', str(tmp_path / 'nowhere.tree')]) == 3


def test_descriptive_commands(tmp_path, capsys):
    tree = write(tmp_path, 't.tree', '(a@2 (b@1) (a@2))')
    for command in ('profile', 'strrep', 'zones', 'classes'):
        assert main([command, tree]) == 0
    out = capsys.readouterr().out
    assert 'command: classes' in out


def test_gen_is_deterministic(capsys):
    assert main(['--seed', '3', 'gen', 'tree', '6']) == 0
    first = capsys.readouterr().out
    assert main(['--seed', '3', 'gen', 'tree', '6']) == 0
    assert capsys.readouterr().out == first
    assert len(parse_tree(first.splitlines()[0])) == 6


def test_gen_numbers_files(tmp_path):
    out = str(tmp_path / 'inst' / 'w.odta')
    assert main(['--out', out, 'gen', 'weak', '2', '--count', '2']) == 0
    assert sorted(os.listdir(str(tmp_path / 'inst'))) == ['w_0.odta', 'w_1.odta']


def test_global_flags_precede_subcommand(tmp_path, weak_file):
    chain = write(tmp_path, 'chain.tree', '(a@5 (a@5))')
    with pytest.raises(SystemExit):
        main(['member', weak_file, chain, '--format', 'record'])
