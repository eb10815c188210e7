"""Numerics for the n-th linear polarization constant of real n-space."""

from .errors import DomainError, InputError, SizeError
from .proof_check import breakpoints, global_minimum_scan, mu_at_breakpoint, phi_analysis, table_row
from .sign_search import lambda_map, longest_sum_exhaustive, longest_sum_local
from .slice_min import CubeSliceProblem, SlicePoint, k0, mu_closed_form, mu_oracle, product_value
from .sphere_opt import OptimizerConfig, maximize_product, witness_from_longest_sum, witness_product
from .vectors import UnitVectorSet, generate, gram, load, rigidity_check

__all__ = [
    "CubeSliceProblem",
    "DomainError",
    "InputError",
    "OptimizerConfig",
    "SizeError",
    "SlicePoint",
    "UnitVectorSet",
    "breakpoints",
    "generate",
    "global_minimum_scan",
    "gram",
    "k0",
    "lambda_map",
    "load",
    "longest_sum_exhaustive",
    "longest_sum_local",
    "maximize_product",
    "mu_at_breakpoint",
    "mu_closed_form",
    "mu_oracle",
    "phi_analysis",
    "product_value",
    "rigidity_check",
    "table_row",
    "witness_from_longest_sum",
    "witness_product",
]
