"""Generalized fractional maximal functions: rearrangements, operators, cones.

Thin bindings over the C++ library; grids are numpy arrays indexed [x, y, ...]
over the box [-L, L]^n with cell-constant values.
"""

from ._core import (  # noqa: F401
    ConfigError,
    DomainError,
    Kernel,
    SingularIntegrand,
    StepFunction,
    classify,
    corpus,
    double_star,
    k4_functional,
    maximal_function,
    norm,
    optimal_norm_lower,
    plot_keys,
    rearrangement,
    riesz_potential,
    run_suites,
    supremal_T,
    theorem43,
    unit_ball_volume,
)

__version__ = "0.1.0"
