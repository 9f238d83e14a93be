"""Quasi-Feynman approximations of Schroedinger propagators for Hamiltonians
written as finite weighted sums of operators."""

from .baselines import (
    AbstractFamily,
    bss_product,
    chernoff_distance,
    r_abstract_family,
    remizov_single,
    skew_family,
    stone_family,
    trotter_product,
)
from .experiment import (
    ConfigError,
    ConvergenceReport,
    SweepConfig,
    build_problem,
    fit_order,
    load_config,
    parse_config,
    run_sweep,
)
from .families import (
    ChernoffFamily,
    Decomposition,
    HypothesisError,
    TangencyReport,
    assemble_decomposition,
    check_tangency,
    make_family,
)
from .operators import (
    adjoint,
    adjoint_and_hermitian_check,
    apply,
    as_operator,
    as_state,
    identity,
    operator_norm,
)
from .oracle import (
    SpectralDecomposition,
    euler_limit_exp,
    exp_bounded,
    hermitian_eigendecompose,
    stone_propagator,
)
from .quasi_feynman import (
    QuasiFeynmanConfig,
    TermCapError,
    binomial_formula,
    chernoff_iterate,
    multinomial_power,
    r_family,
    r_operator,
    series_formula,
    solve_schrodinger,
)

__version__ = "0.1.0"
