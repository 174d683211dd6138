"""Linear coding for broadcast with noisy side information."""
from .gf import FieldSpec, FqMatrix, fe_add, fe_inv, fe_mul, mat_rank
from .kernels import BACKEND
from .problem import BnsiProblem, interfering_set, induced_subproblem, load_problem, save_problem
from .validity import is_valid, is_valid_by_enumeration, is_valid_by_rank
from .decoder import build_decoder, decode, encode
from .structure import b_max, c_max, disjoint_phi_collection, phi_emptiness
from .codes import LinearCodeSpec, grs_parity_check, min_distance
from .bounds import bounds_report, ecc_based_encoder, partition_optimizer, simple_scheme
from .index_coding import IndexCodingProblem, reduce_to_ic
from .oracle import optimal_codelength_exhaustive, optimal_codelength_subspace
from .sim import simulate

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BnsiProblem",
    "FieldSpec",
    "FqMatrix",
    "IndexCodingProblem",
    "LinearCodeSpec",
    "b_max",
    "bounds_report",
    "build_decoder",
    "c_max",
    "decode",
    "disjoint_phi_collection",
    "ecc_based_encoder",
    "encode",
    "fe_add",
    "fe_inv",
    "fe_mul",
    "grs_parity_check",
    "induced_subproblem",
    "interfering_set",
    "is_valid",
    "is_valid_by_enumeration",
    "is_valid_by_rank",
    "load_problem",
    "mat_rank",
    "min_distance",
    "optimal_codelength_exhaustive",
    "optimal_codelength_subspace",
    "partition_optimizer",
    "phi_emptiness",
    "reduce_to_ic",
    "save_problem",
    "simple_scheme",
    "simulate",
]
