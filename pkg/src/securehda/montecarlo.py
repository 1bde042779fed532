"""
Sample-level simulation of the four schemes under genie-aided decoding.

Every digital index (and the hybrid auxiliary codeword U) is assumed to be
decoded correctly, so the receiver holds the true auxiliary samples and only
the linear MMSE stage is simulated. Trials are split into fixed-size blocks;
block ``b`` draws from its own Philox stream keyed by ``(seed, b)``, so the
result does not depend on how blocks are scheduled. Block statistics are
merged in ascending block order.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .analytics import (
    hybrid_coefficients,
    hybrid_mismatch_distortion,
    optimal_distortion,
    separation_coefficients,
    superimposed_mismatch_distortion,
    superimposed_plan,
    uncoded_distortion,
    uncoded_gain,
)
from .mmse import hybrid_problem, separation_problem, solve, superimposed_problem, uncoded_problem
from .model import SchemeKind, check_mismatch, validate

DEFAULT_BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class SimulationConfig:
    trials: int = 100_000
    seed: int = 0
    block_size: int = DEFAULT_BLOCK_SIZE
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if self.block_size < 1:
            raise ValueError(f"block_size must be >= 1, got {self.block_size!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned value, got {self.seed!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers!r}")

    @property
    def n_blocks(self):
        return -(-self.trials // self.block_size)

    def block_lengths(self):
        full, rest = divmod(self.trials, self.block_size)
        return [self.block_size] * full + ([rest] if rest else [])


@dataclass(frozen=True)
class SimulationReport:
    scheme: SchemeKind
    n1a: float
    empirical_d: float
    std_err: float
    analytic_d: float
    trials: int
    seed: int
    empirical_leakage: Optional[float] = None
    empirical_power: Optional[float] = None
    power_std_err: Optional[float] = None


def block_rng(seed, block):
    """Independent generator for one block of trials."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _std_err(n, m2):
    if n < 2:
        return math.nan
    return math.sqrt(m2 / (n - 1) / n)


def _run_blocks(draw, cfg):
    """Apply ``draw(rng, n) -> dict[name, welford triple]`` to every block and merge per name."""
    lengths = cfg.block_lengths()

    def one(b):
        return draw(block_rng(cfg.seed, b), lengths[b])

    if cfg.workers > 1 and len(lengths) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(one, range(len(lengths))))
    else:
        parts = [one(b) for b in range(len(lengths))]
    return {name: _kernels.merge_stats([p[name] for p in parts]) for name in parts[0]}


def _report(scheme, point, cfg, stats, analytic_d, leakage=None):
    n, mean, m2 = stats["err"]
    power = stats.get("power")
    return SimulationReport(
        scheme=scheme,
        n1a=point.n1a,
        empirical_d=mean,
        std_err=_std_err(n, m2),
        analytic_d=analytic_d,
        trials=n,
        seed=cfg.seed,
        empirical_leakage=leakage,
        empirical_power=None if power is None else power[1],
        power_std_err=None if power is None else _std_err(power[0], power[2]),
    )


def _source(rng, n, params):
    # V = V' + T
    vp = rng.standard_normal(n) * math.sqrt(params.sigma_vp2)
    t = rng.standard_normal(n) * math.sqrt(params.sigma_t2)
    return vp, t


def simulate_uncoded(params, point, cfg):
    params = validate(params)
    alpha = uncoded_gain(params)
    coeffs = solve(uncoded_problem(params, point)).coeffs
    sw, sw2 = math.sqrt(point.n1a), math.sqrt(params.n2)

    def draw(rng, n):
        vp, t = _source(rng, n, params)
        v = vp + t
        x = alpha * v
        y = x + sw * rng.standard_normal(n)
        w2 = sw2 * rng.standard_normal(n)
        return {
            "err": _kernels.error_stats(v, np.stack((y, vp)), coeffs),
            "power": _kernels.square_stats(x),
            "v2": _kernels.square_stats(v),
            "w2": _kernels.square_stats(w2),
        }

    stats = _run_blocks(draw, cfg)
    # Gaussian leakage 0.5*log2(1 + alpha^2 Var(V) / Var(W')) from Z = alpha*V + W'
    leakage = 0.5 * math.log2(1.0 + alpha * alpha * stats["v2"][1] / stats["w2"][1])
    return _report(SchemeKind.UNCODED, point, cfg, stats, uncoded_distortion(params, point), leakage)


def _simulate_hda(scheme, params, point, cfg, power, gain, side_var, coeffs, analytic_d):
    # U = gain*V + X, Y = X + W_a; the receiver holds (U, side information, Y)
    sx, sw = math.sqrt(power), math.sqrt(point.n1a)
    # split T into the part recovered by the digital stream and the residual T~
    s_tq = math.sqrt(max(0.0, params.sigma_t2 - (params.sigma_v2 - side_var)))
    s_tres = math.sqrt(params.sigma_v2 - side_var)
    s_vp = math.sqrt(params.sigma_vp2)

    def draw(rng, n):
        vp = s_vp * rng.standard_normal(n)
        if scheme is SchemeKind.SUPERIMPOSED:
            side = vp + s_tq * rng.standard_normal(n)
        else:
            side = vp
        v = side + s_tres * rng.standard_normal(n)
        x = sx * rng.standard_normal(n)
        u = x + gain * v
        y = x + sw * rng.standard_normal(n)
        return {
            "err": _kernels.error_stats(v, np.stack((u, side, y)), coeffs),
            "power": _kernels.square_stats(x),
        }

    return _report(scheme, point, cfg, _run_blocks(draw, cfg), analytic_d)


def simulate_hybrid(params, point, cfg, k=None):
    """Hybrid scheme at actual noise ``point.n1a``; ``k`` overrides the designed gain."""
    params = validate(params)
    check_mismatch(params, point)
    sol = solve(hybrid_problem(params, point, k=k))
    if k is None:
        k = hybrid_coefficients(params).k
        analytic = hybrid_mismatch_distortion(params, point)
    else:
        analytic = sol.mse
    return _simulate_hda(SchemeKind.HYBRID, params, point, cfg, params.p, k, params.sigma_vp2,
                         sol.coeffs, analytic)


def simulate_superimposed(params, point, cfg):
    params = validate(params)
    check_mismatch(params, point)
    plan = superimposed_plan(params)
    coeffs = solve(superimposed_problem(params, point)).coeffs
    return _simulate_hda(SchemeKind.SUPERIMPOSED, params, point, cfg, plan.p_hwz, plan.k1,
                         params.sigma_v2 - plan.sigma_ttilde2, coeffs,
                         superimposed_mismatch_distortion(params, point))


def simulate_separation(params, point, cfg):
    params = validate(params)
    check_mismatch(params, point)
    alpha = separation_coefficients(params).alpha
    d_star = optimal_distortion(params)
    coeffs = solve(separation_problem(params)).coeffs
    sa, sf = math.sqrt(alpha), math.sqrt(d_star)

    def draw(rng, n):
        vp, t = _source(rng, n, params)
        v = vp + t
        u = sa * v + sf * rng.standard_normal(n)
        return {"err": _kernels.error_stats(v, np.stack((u, vp)), coeffs)}

    return _report(SchemeKind.SEPARATION, point, cfg, _run_blocks(draw, cfg), d_star)


_SIMULATORS = {
    SchemeKind.SEPARATION: simulate_separation,
    SchemeKind.UNCODED: simulate_uncoded,
    SchemeKind.HYBRID: simulate_hybrid,
    SchemeKind.SUPERIMPOSED: simulate_superimposed,
}


def simulate(scheme, params, point, cfg):
    return _SIMULATORS[SchemeKind(scheme)](params, point, cfg)
