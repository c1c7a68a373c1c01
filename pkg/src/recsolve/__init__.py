"""Randomized recombination solver for full-row-rank linear systems.

Public surface: the solver (:func:`solve`, :class:`SolverConfig`), the
recombination primitive (:func:`recombine`), the matrix-free row oracle
(:func:`oracle_from_dense`, :class:`RowOracle`), seeded samplers, the
pivoted-elimination baseline (:func:`gauss_solve`), flop counting, and
file I/O. The hot kernels run compiled when the extension is available;
set ``RECSOLVE_PURE_PYTHON=1`` to force the numpy fallback.
"""

from . import kernels
from .elimination import EliminationResult, SingularMatrixError, gauss_solve
from .flopcount import FlopCounter, counted_dot
from .generate import random_system
from .linop import (
    DenseRowOracle,
    DimensionMismatch,
    RowOracle,
    oracle_from_dense,
    residual_inf,
)
from .recombine import RecOutcome, recombine
from .sampling import DistributionSpec, RngState, sample_iterates, sample_vector
from .solver import (
    ConfigurationError,
    IterateSet,
    PairSchedule,
    SolveReport,
    SolverConfig,
    StepFailure,
    choose_pairs,
    degeneracy_guard,
    feas_tol,
    solve,
    step,
)
from .sysio import SystemFormatError, parse_system, read_report, write_report

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DenseRowOracle",
    "DimensionMismatch",
    "DistributionSpec",
    "EliminationResult",
    "FlopCounter",
    "IterateSet",
    "PairSchedule",
    "RecOutcome",
    "RngState",
    "RowOracle",
    "SingularMatrixError",
    "SolveReport",
    "SolverConfig",
    "StepFailure",
    "SystemFormatError",
    "choose_pairs",
    "counted_dot",
    "degeneracy_guard",
    "feas_tol",
    "gauss_solve",
    "kernels",
    "oracle_from_dense",
    "parse_system",
    "random_system",
    "read_report",
    "recombine",
    "residual_inf",
    "sample_iterates",
    "sample_vector",
    "solve",
    "step",
    "write_report",
    "__version__",
]
