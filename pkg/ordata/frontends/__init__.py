from ordata.frontends.constraints import Key, Inclusion, Var, Union, Inter, Compl, SetConstraint, LinearConstraint, \
    satisfies, satisfies_all, sterm_family, render_constraints
from ordata.frontends.dtd import Dtd, SatVerdict, dtd_automaton, dtd_to_weak_odta, dtd_sat, conforms
from ordata.frontends.setlinear import setlinear_to_odta, set_constraint_automaton
from ordata.frontends.text import WordTransducer, TextAutomaton, msp, simulate_text_automaton, \
    text_automaton_to_weak_odta, word_tree, tree_word
from ordata.frontends.formats import parse_dtd, parse_constraints, parse_term
