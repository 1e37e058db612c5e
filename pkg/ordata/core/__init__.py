from .trees import Alphabet, LabeledTree, OrderedDataTree, StringDataTree
from .profiles import Rel, SAME, DIFF, ABSENT, ProfileTriple, ALL_PROFILES, ROOT_PROFILE, profile
from .values import ROOT, value_classes, value_sets, count, string_representation, canonical_rank, \
    prefix_tree_representation
from .data_graph import DataGraph, recolor_data_graph
from .zones import Zone, ZonePartition, zones, zonal_string_representation, zone_graph
from .formats import parse_tree, serialize_tree
