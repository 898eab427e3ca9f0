"""Query-efficient search for fixed points of monotone maps on integer grids.

The library provides exact lattice primitives, query-counted oracles with
composable adapters, solvers for the sign-witness search problem on boxes
(1-D and 2-D bases, witness refinement, dimension decomposition), top-level
fixed-point solvers with a coordinate-binary-search baseline, exhaustive
instruments for small boxes, and a seeded benchmark harness.
"""

from .errors import InstanceInvalidError, LoadError, SolverContractError, UsageError
from .lattice import (
    Box,
    enumerate_box,
    glb,
    leq,
    lub,
    sgn,
    uniform_nonneg,
    uniform_nonpos,
)
from .oracles import (
    FnOracle,
    QueryStats,
    SignOracle,
    box_restriction,
    collapse_last_down,
    collapse_last_up,
    project_last,
    slice_oracle,
    validate,
    validate_fn,
)
from .instances import (
    InstanceSpec,
    enumerate_monotone_maps,
    enumerate_sign_tables,
    gen_constant_shift,
    gen_hidden_point,
    gen_random_steps,
    instantiate,
    parse_instance,
    serialize_instance,
)
from .rng import XorShift64Star
from .star import (
    DecompositionLedger,
    RefinedWitness,
    StarSolution,
    bracketed_zero_in_row,
    decompose_star,
    solve_refined_star,
    solve_star,
    solve_star_1d,
    solve_star_2d_bisect,
    solve_star_2d_staircase,
    split_schedule,
)
from .tarski import (
    TarskiResult,
    all_fixed_points,
    brute_force_fixed_point,
    solve_tarski,
    solve_tarski_dqy,
)

__version__ = "0.1.0"

__all__ = [
    "Box", "DecompositionLedger", "FnOracle", "InstanceInvalidError",
    "InstanceSpec", "LoadError", "QueryStats", "RefinedWitness", "SignOracle",
    "SolverContractError", "StarSolution", "TarskiResult", "UsageError",
    "XorShift64Star", "all_fixed_points", "box_restriction",
    "bracketed_zero_in_row", "brute_force_fixed_point", "collapse_last_down",
    "collapse_last_up", "decompose_star", "enumerate_box",
    "enumerate_monotone_maps", "enumerate_sign_tables", "gen_constant_shift",
    "gen_hidden_point", "gen_random_steps", "glb", "instantiate", "leq",
    "lub", "parse_instance", "project_last", "serialize_instance", "sgn",
    "slice_oracle", "solve_refined_star", "solve_star", "solve_star_1d",
    "solve_star_2d_bisect", "solve_star_2d_staircase", "solve_tarski",
    "solve_tarski_dqy", "split_schedule", "uniform_nonneg", "uniform_nonpos",
    "validate", "validate_fn",
]
