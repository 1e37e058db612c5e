from ordata.cli.report import RunReport, EXIT_CODES
from ordata.cli.generate import instances, random_tree, random_shape, random_nfa, random_tree_automaton, \
    random_weak_odta, random_odta
