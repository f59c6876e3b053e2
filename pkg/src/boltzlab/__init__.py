"""Numerical laboratory for the non-cutoff Boltzmann collision operator.

Modules
-------
grid      velocity grids, analytic test functions, mollification
kernel    collision cross section, cancellation constant C_S
sigma     sigma-representation evaluator and weak-form functionals
carleman  Carleman kernel K, Q = Q_s + Q_ns, pointwise evaluators
norms     weighted Lebesgue / Sobolev / Hoelder norms, the X norm
solver    grid collision operator, linear solves, Picard iteration
lab       verification suites with machine-readable reports
cli       command-line entry point
"""

from .grid import (AnalyticFunction, Bump, Distribution, Gaussian,
                   LinearCombination, Mollifier, PolyDecay, VelocityGrid,
                   build_velocity_grid, chi, eval_analytic, maxwellian,
                   mollify)
from .kernel import CancellationConstant, KernelParams, compute_CS, eval_B
from .sigma import eval_Q_sigma, post_collision
from .carleman import (AnnularScheme, PlaneQuadrature, eval_K, eval_Q,
                       eval_Qns, eval_Qs)
from .norms import (NormSpec, m_default, weighted_holder_seminorm,
                    weighted_lp_norm, weighted_sobolev_norm, x_norm)

__version__ = "0.1.0"

__all__ = [
    "AnalyticFunction", "AnnularScheme", "Bump", "CancellationConstant",
    "Distribution", "Gaussian", "KernelParams", "LinearCombination",
    "Mollifier", "NormSpec", "PlaneQuadrature", "PolyDecay", "VelocityGrid",
    "build_velocity_grid", "chi", "compute_CS", "eval_analytic", "eval_B",
    "eval_K", "eval_Q", "eval_Q_sigma", "eval_Qns", "eval_Qs", "m_default",
    "maxwellian", "mollify", "post_collision", "weighted_holder_seminorm",
    "weighted_lp_norm", "weighted_sobolev_norm", "x_norm",
]
