"""
Linear MMSE estimation of the source from a small set of jointly Gaussian observations.

A problem is the observation covariance ``lambda_mat``, the cross-covariance
``gamma_vec`` between the source and the observations, and the source prior
variance. The estimator weights solve ``lambda_mat @ coeffs = gamma_vec`` and
the residual error is ``prior_var - gamma_vec @ coeffs``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .analytics import separation_coefficients, superimposed_plan, uncoded_gain, hybrid_coefficients, optimal_distortion
from .model import validate

SINGULAR_RTOL = 1e-10


class SingularCovariance(ArithmeticError):
    pass


@dataclass(frozen=True)
class MmseProblem:
    lambda_mat: np.ndarray
    gamma_vec: np.ndarray
    prior_var: float

    def __post_init__(self):
        lam = np.array(self.lambda_mat, dtype=float)
        gam = np.array(self.gamma_vec, dtype=float).reshape(-1)
        d = gam.shape[0]
        if lam.shape != (d, d):
            raise ValueError(f"lambda_mat must be {d}x{d}, got shape {lam.shape}")
        if not np.allclose(lam, lam.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(lam).max())):
            raise ValueError("lambda_mat is not symmetric")
        if not self.prior_var > 0:
            raise ValueError(f"prior_var must be > 0, got {self.prior_var!r}")
        lam.setflags(write=False)
        gam.setflags(write=False)
        object.__setattr__(self, "lambda_mat", lam)
        object.__setattr__(self, "gamma_vec", gam)
        object.__setattr__(self, "prior_var", float(self.prior_var))

    @property
    def dim(self):
        return self.gamma_vec.shape[0]


@dataclass(frozen=True)
class MmseSolution:
    coeffs: np.ndarray
    mse: float


def solve(problem):
    """Cholesky solve of the normal equations.

    Raises
    ------
    SingularCovariance
        If the smallest eigenvalue of ``lambda_mat`` is below ``1e-10 * trace``.
    """
    lam, gam = problem.lambda_mat, problem.gamma_vec
    tr = float(np.trace(lam))
    min_eig = float(np.linalg.eigvalsh(lam)[0])
    if not min_eig > SINGULAR_RTOL * tr:
        raise SingularCovariance(
            f"observation covariance is (numerically) singular: min eigenvalue {min_eig:.3g}, trace {tr:.3g}")
    coeffs = linalg.cho_solve(linalg.cho_factor(lam, lower=True), gam)
    mse = problem.prior_var - float(gam @ coeffs)
    return MmseSolution(coeffs=coeffs, mse=mse)


def _hda_problem(power, gain, sigma_v2, side_var, n1a):
    # observations (U, side information, Y) with U = X + gain*V, Y = X + W
    lam = [
        [power + gain * gain * sigma_v2, gain * side_var, power],
        [gain * side_var, side_var, 0.0],
        [power, 0.0, power + n1a],
    ]
    gam = [gain * sigma_v2, side_var, 0.0]
    return MmseProblem(lam, gam, sigma_v2)


def hybrid_problem(params, point, k=None):
    """Observations (U, V', Y) of the hybrid scheme; ``k`` overrides the designed gain."""
    params = validate(params)
    if k is None:
        k = hybrid_coefficients(params).k
    return _hda_problem(params.p, k, params.sigma_v2, params.sigma_vp2, point.n1a)


def superimposed_problem(params, point):
    """Observations (U, V~, Y - X1) after the digital stream is decoded and removed."""
    params = validate(params)
    plan = superimposed_plan(params)
    return _hda_problem(plan.p_hwz, plan.k1, params.sigma_v2, params.sigma_v2 - plan.sigma_ttilde2, point.n1a)


def separation_problem(params):
    """Observations (U, V') with U = sqrt(alpha) V + F, Var(F) = D*."""
    params = validate(params)
    alpha = separation_coefficients(params).alpha
    s = math.sqrt(alpha)
    svp = params.sigma_vp2
    lam = [
        [alpha * params.sigma_v2 + optimal_distortion(params), s * svp],
        [s * svp, svp],
    ]
    return MmseProblem(lam, [s * params.sigma_v2, svp], params.sigma_v2)


def uncoded_problem(params, point):
    """Observations (Y, V') with Y = alpha V + W, Var(W) = n1a."""
    params = validate(params)
    alpha = uncoded_gain(params)
    svp = params.sigma_vp2
    lam = [
        [alpha * alpha * params.sigma_v2 + point.n1a, alpha * svp],
        [alpha * svp, svp],
    ]
    return MmseProblem(lam, [alpha * params.sigma_v2, svp], params.sigma_v2)
