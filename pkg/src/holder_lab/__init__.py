"""Exact classification of self-similar sets up to Lipschitz and strict Hölder equivalence."""

from .arith import Exponent, LogRatio, Monomial, exponent_vector, factorize, mult_dependence, rational_power
from .classify import (
    SelfSimilar,
    TwoBranchInstance,
    Verdict,
    VerdictKind,
    classify,
    classify_cubes_holder,
    classify_cubes_lipschitz,
    classify_symbolic,
    classify_two_branch_holder,
    classify_two_branch_lipschitz,
    reduce_holder_to_lipschitz,
)
from .cube import FractalCube, TDStatus, check_total_disconnectedness, render, to_symbolic, validate
from .symbolic import SymbolicPoint, SymbolicSpace, common_prefix_length, distance
from .witness import (
    MapWitness,
    build_exponent_witness,
    build_uniform_holder_witness,
    compose,
    eval_witness,
    verify_witness,
)

__version__ = "0.1.0"
