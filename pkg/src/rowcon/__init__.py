"""Analysis of contractive matrix tuples and their minimal isometric
dilations: structure invariants, equivalence decisions, and the
kernel-ideal similarity test."""

from .core import (
    DEFAULT_CONFIG,
    RowContraction,
    ToleranceConfig,
    TransferOperator,
    ValidationReport,
    fixed_point_space,
    gauge_transform,
    make_atomic,
    make_cuntz_state,
    phi_apply,
    phi_infinity,
    pure_rank,
    random_contraction,
    reference_pair,
    transfer_matrix,
    validate,
)

__version__ = "0.1.0"
