"""Finite-truncation laboratory for Ramsey-type combinatorics.

The package provides:

  * an abstract approximation-space contract with an executable audit
    of its six structural laws on finite truncations (core, audit);
  * three concrete spaces: finite subsets of an initial segment of N,
    echelon matrices over GF(q), and ordered set partitions (spaces);
  * a depth-bounded combinatorial-forcing engine realizing the Galvin
    dichotomy for length-bounded front families (forcing);
  * searchers that compute and certify small Ramsey-type witnesses:
    classical, vector-space, and partition versions (ramsey);
  * a batch CLI with reproducible, machine-readable output (cli).
"""

from .core import Approximation, Neighborhood, Space, Stem, approx, depth, extensions, fin_below, fin_leq, length
from .errors import (
    CeilingExceededError,
    EmptyNeighborhoodError,
    FusionExhaustedError,
    InvalidApproximationError,
    MixedSpaceError,
    NotInSpaceError,
    OutOfRangeError,
    ParseError,
    RamspaceError,
)
from .gflinalg import (
    EchelonMatrix,
    FieldElement,
    FqMatrix,
    enumerate_rre,
    gaussian_binomial,
    in_span,
    rref,
    subspace_leq,
)
from .spaces import (
    EllentuckSpace,
    MatrixSpace,
    PartitionSpace,
    SegmentVerdict,
    SubspaceApprox,
    coarsenings,
    ell_space,
    enumerate_partitions,
    mat_pn,
    mat_rn,
    matrix_space,
    part_coarser,
    part_rn,
    partition_space,
    stirling2,
    subspace_initial_segment,
)

__version__ = "0.1.0"
