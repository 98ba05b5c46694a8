"""Dimensions of self-affine Moran sets and measures."""

from ._core import (
    Construction,
    MoranError,
    box_count,
    cmd_dims,
    cmd_measure,
    cmd_oracle,
    cmd_render,
    cmd_validate,
    count_approx_squares,
    dimension_report,
    entropy_k,
    k_of_delta,
    l_of_k,
    load_spec,
    measure_dimensions,
    n_minus,
    n_plus_count,
    random_construction,
    render_ppm,
    verify,
)

__all__ = [
    "Construction",
    "MoranError",
    "box_count",
    "cmd_dims",
    "cmd_measure",
    "cmd_oracle",
    "cmd_render",
    "cmd_validate",
    "count_approx_squares",
    "dimension_report",
    "entropy_k",
    "k_of_delta",
    "l_of_k",
    "load_spec",
    "measure_dimensions",
    "n_minus",
    "n_plus_count",
    "random_construction",
    "render_ppm",
    "verify",
]
