"""Numerical toolkit for endpoint extrapolation of operators on analytic
Hardy spaces of the circle: spectral grids, Fourier multipliers, Zygmund
classes, the analytic decomposition of unity and a chain tracer."""

from .errors import HardyError, MathDomainError, ValidationError
from .families import (
    FamilySpec,
    beta,
    build_family,
    decomposition_corpus,
    dirichlet_analytic,
    fejer,
    geometric,
    parse_family,
    random_analytic,
    random_lambda,
    vallee_poussin,
)
from .kernels import BACKEND
from .kislyakov import Decomposition, decompose, f_lambda, g_lambda
from .multipliers import hilbert, lacunary_projection, lambda_set, riesz_projection, square_function
from .orlicz import OrliczParams, luxemburg_norm, phi_r, zygmund_functional
from .spectral import GridFunction, TrigPoly, analyze, grid_size_for, lp_norm, synthesize
from .yano import (
    OperatorHandle,
    compose_with_riesz,
    extrapolation_ratio,
    operator_by_name,
    trace_proof,
)

__version__ = "0.1.0"
