"""Counting real eigenvalues of traveling-wave linearizations with the
hyperplane (generalized Maslov) index, cross-checked by the Evans function."""

from ._core import (
    GkdvModel,
    IndexComputationError,
    KdvbModel,
    ModelError,
    System,
    box,
    columns_to_coform,
    coform_pushforward,
    evans,
    gkdv_d2prime0,
    gkdv_quadratic_roots,
    gkdv_system,
    gkdv_verdict,
    induced_matrix,
    kdvb_left_shelf_bound,
    kdvb_system,
    right_shelf,
    wedge_top,
)

__all__ = [
    "GkdvModel",
    "IndexComputationError",
    "KdvbModel",
    "ModelError",
    "System",
    "box",
    "columns_to_coform",
    "coform_pushforward",
    "evans",
    "gkdv_d2prime0",
    "gkdv_quadratic_roots",
    "gkdv_system",
    "gkdv_verdict",
    "induced_matrix",
    "kdvb_left_shelf_bound",
    "kdvb_system",
    "right_shelf",
    "wedge_top",
]
