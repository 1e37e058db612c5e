from .nfa import Nfa, PredicateNfa, nfa_member, nfa_empty, nfa_union, nfa_intersection, nfa_product
from .tree_automaton import UnrankedTreeAutomaton, ta_run, ta_accepts, check_run, ta_empty, ta_enumerate, \
    ta_product_union, ta_product_intersection, all_trees_automaton, empty_tree_automaton
from .transducer import TreeTransducer, identity_transducer, transducer_apply
from .periodic import PeriodicLanguageUnion, periodic_contains
from .profile_automaton import profile_consistency_automaton
from .apc import Apc, apc_solve
from .regex import compile_regex
from .formats import parse_automaton, serialize_automaton
