"""Distribution-weighted support vector classifiers."""

from ._core import (
    Dataset,
    Model,
    accuracy,
    dist_to_bayes,
    fit,
    gaussian_2d,
    gmean,
    gram,
    grid_search,
    methods,
    monk3_full,
    monk3_sample,
    robustness_1d,
    run_cli,
    solve_eps_l1,
    v_matrix,
    v_vector,
    vac,
)

__all__ = [
    "Dataset",
    "Model",
    "accuracy",
    "dist_to_bayes",
    "fit",
    "gaussian_2d",
    "gmean",
    "gram",
    "grid_search",
    "methods",
    "monk3_full",
    "monk3_sample",
    "robustness_1d",
    "run_cli",
    "solve_eps_l1",
    "v_matrix",
    "v_vector",
    "vac",
]
