"""
Closed-form rates, powers, estimator coefficients and distortions.

Every function takes :class:`~securehda.model.ValidatedParams` (raw
``SystemParams`` are validated on the way in). Mismatch functions also take a
:class:`~securehda.model.MismatchPoint` with the actual main-channel noise.
"""

import math
from dataclasses import dataclass

from .model import (
    LeakageBudgetExceedsPower,
    SchemeKind,
    check_mismatch,
    validate,
    wiretap_capacity,
)

_LN2 = math.log(2.0)


def _log2_1p(x):
    return math.log1p(x) / _LN2


def leakage_gain(params):
    """The factor 2**(2*i_eps) that every leakage-aware formula carries."""
    return 2.0 ** (2.0 * params.i_eps)


@dataclass(frozen=True)
class RateReport:
    c_s: float
    r_ieps: float
    wz_rate: float


@dataclass(frozen=True)
class SeparationCoefficients:
    alpha: float
    lambda1: float
    lambda2: float


@dataclass(frozen=True)
class UncodedCoefficients:
    alpha: float
    lambda1: float
    lambda2: float


@dataclass(frozen=True)
class HybridCoefficients:
    k: float
    lambda1: float
    lambda2: float
    lambda3: float

    @property
    def k_sq(self):
        return self.k * self.k


@dataclass(frozen=True)
class SuperimposedPlan:
    """Power split and analog gain of the superimposed digital + hybrid scheme."""

    p_wz: float
    p_hwz: float
    k1: float
    sigma_ttilde2: float

    @property
    def k1_sq(self):
        return self.k1 * self.k1


def secrecy_capacity(params):
    params = validate(params)
    return wiretap_capacity(params.p, params.n1, params.n2)


def wyner_ziv_rate(params, alpha, distortion):
    """Wyner-Ziv rate 0.5*log2((alpha*sigma_t2 + D) / D) of the test channel U = sqrt(alpha) V + F."""
    return 0.5 * _log2_1p(alpha * params.sigma_t2 / distortion)


def optimal_distortion(params):
    """Minimum achievable distortion D* for the given leakage budget."""
    params = validate(params)
    p, n1, n2 = params.p, params.n1, params.n2
    return params.sigma_t2 / ((p + n1) / (p + n2) * (n2 / n1) * leakage_gain(params))


def separation_coefficients(params):
    params = validate(params)
    d_star = optimal_distortion(params)
    p, n1, n2 = params.p, params.n1, params.n2
    # alpha from the rate-matching condition, evaluated at D = D*
    alpha = d_star / params.sigma_t2 * (leakage_gain(params) * (p + n1) / (p + n2) * n2 / n1 - 1.0)
    return SeparationCoefficients(alpha=alpha, lambda1=math.sqrt(alpha), lambda2=1.0 - alpha)


def rate_with_leakage(params):
    params = validate(params)
    c_s = secrecy_capacity(params)
    coeffs = separation_coefficients(params)
    wz = wyner_ziv_rate(params, coeffs.alpha, optimal_distortion(params))
    return RateReport(c_s=c_s, r_ieps=c_s + params.i_eps, wz_rate=wz)


def uncoded_gain(params):
    """Transmit gain alpha for X = alpha*V that leaks exactly i_eps to the eavesdropper.

    Raises
    ------
    LeakageBudgetExceedsPower
        If that gain would need more than the available power.
    """
    params = validate(params)
    alpha_sq = params.n2 * math.expm1(2.0 * params.i_eps * _LN2) / params.sigma_v2
    if alpha_sq * params.sigma_v2 > params.p:
        raise LeakageBudgetExceedsPower(
            f"leakage i_eps={params.i_eps!r} needs transmit power {alpha_sq * params.sigma_v2:.6g} > p={params.p!r}")
    return math.sqrt(alpha_sq)


def uncoded_coefficients(params, point=None):
    """Gain and estimator weights of the uncoded scheme.

    The weights use the actual noise ``point.n1a`` when a point is given,
    otherwise the design noise.
    """
    params = validate(params)
    alpha = uncoded_gain(params)
    n = params.n1 if point is None else point.n1a
    den = n + alpha * alpha * params.sigma_t2
    return UncodedCoefficients(alpha=alpha, lambda1=alpha * params.sigma_t2 / den, lambda2=n / den)


def uncoded_distortion(params, point=None):
    params = validate(params)
    alpha = uncoded_gain(params)
    n = params.n1 if point is None else point.n1a
    return params.sigma_t2 / (1.0 + alpha * alpha * params.sigma_t2 / n)


def _k_squared(power, params):
    p, n1, n2 = power, params.n1, params.n2
    return (p * n2 / (p + n2) * leakage_gain(params) - p * n1 / (p + n1))


def hybrid_coefficients(params):
    params = validate(params)
    p, n1, st2 = params.p, params.n1, params.sigma_t2
    k_sq = _k_squared(p, params) / st2
    k = math.sqrt(k_sq)
    pn = p * n1 / (p + n1)
    den = k_sq * st2 + pn
    return HybridCoefficients(
        k=k,
        lambda1=k * st2 / den,
        lambda2=pn / den,
        lambda3=-p * k * st2 / (k_sq * st2 * (p + n1) + p * n1),
    )


def hybrid_k_squared_perfect_secrecy(params):
    """Closed form of k**2 at zero leakage, used to cross-check the general expression."""
    params = validate(params)
    p, n1, n2 = params.p, params.n1, params.n2
    return p * p * (n2 - n1) / (params.sigma_t2 * (p + n1) * (p + n2))


def hybrid_rate_gap(params):
    """Return (Wyner-Ziv rate needed, wiretap rate available) for the hybrid auxiliary U = X + kV.

    Decoding of U at the legitimate receiver works when ``lower < upper``.
    """
    params = validate(params)
    p, n1, n2 = params.p, params.n1, params.n2
    k_sq = hybrid_coefficients(params).k_sq
    lower = 0.5 * _log2_1p(k_sq * params.sigma_t2 / p)
    upper = 0.5 * _log2_1p(p * (params.sigma_v2 / params.sigma_t2) * (n2 - n1) / (n2 * (p + n1)))
    return lower, upper


def hybrid_mismatch_distortion(params, point):
    params = validate(params)
    check_mismatch(params, point)
    p, n1, n2, n1a = params.p, params.n1, params.n2, point.n1a
    bracket = n2 / (p + n2) * leakage_gain(params) - n1 / (p + n1)
    return params.sigma_t2 * n1a / (bracket * (p + n1a) + n1a)


def superimposed_plan(params):
    params = validate(params)
    p, n1, n2 = params.p, params.n1, params.n2
    # one_minus_q = 1 - 2**(-2R); the rearranged numerators avoid cancellation at small R
    one_minus_q = -math.expm1(-2.0 * params.rate_r * _LN2)
    den = (n2 - n1) + (p + n1) * one_minus_q
    p_wz = (p + n1) * (p + n2) * one_minus_q / den
    # clamp the rounding residue at R = C
    p_hwz = max(0.0, (p * (n2 - n1) - n2 * (p + n1) * one_minus_q) / den)
    st2 = params.sigma_t2 * (1.0 - one_minus_q)
    k1_sq = max(0.0, _k_squared(p_hwz, params) / st2) if p_hwz > 0 else 0.0
    return SuperimposedPlan(p_wz=p_wz, p_hwz=p_hwz, k1=math.sqrt(k1_sq), sigma_ttilde2=st2)


def superimposed_mismatch_distortion(params, point):
    params = validate(params)
    check_mismatch(params, point)
    plan = superimposed_plan(params)
    st2, ph, n1a = plan.sigma_ttilde2, plan.p_hwz, point.n1a
    if ph == 0.0:
        # limit P_HWZ -> 0 (R = C): k1**2 / P_HWZ stays finite
        return st2 / leakage_gain(params)
    return st2 * ph * n1a / (plan.k1_sq * st2 * (ph + n1a) + ph * n1a)


def separation_mismatch_distortion(params, point, allow_outage=False):
    """Distortion of the separation scheme at actual noise ``point.n1a``.

    Flat at D* above the design SNR. Below it the digital index is lost; with
    ``allow_outage=True`` that case returns the side-information-only
    distortion ``sigma_t2`` instead of raising.
    """
    params = validate(params)
    if allow_outage and point.n1a > params.n1:
        return params.sigma_t2
    check_mismatch(params, point)
    return optimal_distortion(params)


def mismatch_distortion(scheme, params, point):
    scheme = SchemeKind(scheme)
    if scheme is SchemeKind.SEPARATION:
        return separation_mismatch_distortion(params, point)
    if scheme is SchemeKind.UNCODED:
        return uncoded_distortion(params, point)
    if scheme is SchemeKind.HYBRID:
        return hybrid_mismatch_distortion(params, point)
    return superimposed_mismatch_distortion(params, point)


def summary(params):
    """Ordered (name, value) rows of every closed-form quantity at the design point."""
    params = validate(params)
    rates = rate_with_leakage(params)
    sep = separation_coefficients(params)
    unc = uncoded_coefficients(params)
    hyb = hybrid_coefficients(params)
    plan = superimposed_plan(params)
    lower, upper = hybrid_rate_gap(params)
    return [
        ("c_s", rates.c_s),
        ("r_ieps", rates.r_ieps),
        ("wz_rate", rates.wz_rate),
        ("d_star", optimal_distortion(params)),
        ("alpha_sep", sep.alpha),
        ("lambda_sep_1", sep.lambda1),
        ("lambda_sep_2", sep.lambda2),
        ("alpha_unc", unc.alpha),
        ("lambda_unc_1", unc.lambda1),
        ("lambda_unc_2", unc.lambda2),
        ("d_uncoded", uncoded_distortion(params)),
        ("k", hyb.k),
        ("k_sq", hyb.k_sq),
        ("lambda_hyb_1", hyb.lambda1),
        ("lambda_hyb_2", hyb.lambda2),
        ("lambda_hyb_3", hyb.lambda3),
        ("rate_gap_lower", lower),
        ("rate_gap_upper", upper),
        ("k1", plan.k1),
        ("k1_sq", plan.k1_sq),
        ("p_wz", plan.p_wz),
        ("p_hwz", plan.p_hwz),
        ("sigma_ttilde2", plan.sigma_ttilde2),
    ]
