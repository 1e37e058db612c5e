from .formula import VariableKey, PresburgerFormula, Linear, And, Or, Assignment, sym, cls, zone, ext, run_key, \
    aux, eq, ge, le, conj, disj, exists, combine, evaluate, free_keys, formula_size
from .solver import Status, SolveResult, SAT, UNSAT, UNKNOWN, solve
from .parikh import parikh_formula_nfa, parikh_formula_ta, decode_word, decode_tree, periodic_to_formula
from .syntax import parse_linear_atom, parse_linear_system
from .smtlib import export_smtlib, import_model, write_smtlib
