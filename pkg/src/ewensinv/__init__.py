"""Inversions of Ewens-distributed random permutations: closed forms, sampling,
exact enumeration and Monte Carlo checks."""

from .formulas import (
    ExpectedInversionsResult,
    PairProbabilityResult,
    expected_inversions,
    expected_inversions_derivative,
    pair_inversion_probability,
    pair_probability_derivative,
)
from .permcore import (
    CycleDecomposition,
    Permutation,
    cycle_count,
    decompose,
    fixed_point_count,
    inverse,
    inversion_count,
    inversion_count_naive,
    inversion_set,
    is_inversion,
    make_permutation,
)
from .sampler import (
    EwensParams,
    RandomSeed,
    sample_consistent_chain,
    sample_ewens,
    sample_ewens_with_order,
)

__version__ = "0.1.0"
