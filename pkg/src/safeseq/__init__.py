"""Maximal safe sequences in s-t DAGs and their use for fixing variables
in path-covering ILPs."""

from .antichain_flow import AntichainSelection, arc_width, max_weight_arc_antichain, select_fixing_sequences
from .dominators import DominatorTree, build_dominator_tree, extension
from .graph_core import DiGraph, StDag, as_st_dag, compress_arcs, compress_nodes, normalize_to_st_dag, validate_st_dag
from .graph_io import NamedGraph, parse_graphs, read_graphs, write_graphs
from .ilp import IlpModel, PathSolution, apply_safety_fixing, build_model, export_model, solve_tiny
from .safety_arcs import maximal_safe_arc_sequences, maximal_safe_arc_sequences_subset
from .safety_nodes import SafeSequence, SafeSequenceSet, maximal_safe_sequences, maximal_safe_sequences_no_domtree
from .safety_subset import maximal_safe_sequences_subset

__all__ = [
    "AntichainSelection",
    "DiGraph",
    "DominatorTree",
    "IlpModel",
    "NamedGraph",
    "PathSolution",
    "SafeSequence",
    "SafeSequenceSet",
    "StDag",
    "apply_safety_fixing",
    "arc_width",
    "as_st_dag",
    "build_dominator_tree",
    "build_model",
    "compress_arcs",
    "compress_nodes",
    "export_model",
    "extension",
    "max_weight_arc_antichain",
    "maximal_safe_arc_sequences",
    "maximal_safe_arc_sequences_subset",
    "maximal_safe_sequences",
    "maximal_safe_sequences_no_domtree",
    "maximal_safe_sequences_subset",
    "normalize_to_st_dag",
    "parse_graphs",
    "read_graphs",
    "select_fixing_sequences",
    "solve_tiny",
    "validate_st_dag",
    "write_graphs",
]
