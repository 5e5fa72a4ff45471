"""Constructive ReLU networks with finite-element verification.

The package materializes explicit ReLU networks (squares, products,
monomials, polynomials, 2D nodal functions) as concrete weights, pairs them
with independent 1D/2D finite-element oracles, and analyzes 1-input networks
exactly as piecewise-linear objects.  A FastAPI service wraps the core and
the CLI is a thin client of that service.
"""

from .constructions import (
    HatPlacement,
    Monomial,
    Polynomial,
    build_fem2d,
    build_g,
    build_g_ell,
    build_hat2d,
    build_hat2d_unguarded,
    build_monomial,
    build_polynomial,
    build_psi_ell,
    build_relu1,
    build_x2_hat,
    build_xy_hat,
    fem_to_placements,
    net_add,
    net_compose_modified,
    skip_to_mlp,
)
from .netcore import (
    AffineMap,
    MlpNetwork,
    NetworkFormatError,
    SkipLayer,
    SkipNetwork,
    depth,
    deserialize,
    eval_mlp,
    eval_skip,
    evaluate,
    random_skip_network,
    serialize,
    widths,
)

__version__ = "0.1.0"
