"""Exact spectral quantities of the lazy walk on Z_n^d."""

from .eigen import EigenTable, axis_sin2, build_eigen_table, cached_eigen_table, eigenvalue, moment_sum
from .green import (
    GreenTables,
    IdentityReport,
    build_green_tables,
    cached_green_tables,
    calibrate_floor,
    check_identities,
    green_at,
    green_generating,
    green_table_columns,
    green_table_rows,
    phase_cosines,
    two_point_f,
)

__all__ = [
    "EigenTable",
    "GreenTables",
    "IdentityReport",
    "axis_sin2",
    "build_eigen_table",
    "cached_eigen_table",
    "eigenvalue",
    "moment_sum",
    "build_green_tables",
    "cached_green_tables",
    "green_generating",
    "green_at",
    "phase_cosines",
    "two_point_f",
    "check_identities",
    "calibrate_floor",
    "green_table_columns",
    "green_table_rows",
]
