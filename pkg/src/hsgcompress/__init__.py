"""Hidden-subgroup database compression with a simulated photonic encoder."""

from .compress import CompressedDatabase, compress, lookup, reconstruct
from .groups import TOY_TABLE, FunctionTable, GroupSpec, brute_force_period, group_add
from .hsg import HsgSampleSet, SymmetryHypothesis, infer_period, run_hsg_circuit

__all__ = [
    "CompressedDatabase",
    "FunctionTable",
    "GroupSpec",
    "HsgSampleSet",
    "SymmetryHypothesis",
    "TOY_TABLE",
    "brute_force_period",
    "compress",
    "group_add",
    "infer_period",
    "lookup",
    "reconstruct",
    "run_hsg_circuit",
]
