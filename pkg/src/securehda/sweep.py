"""
SNR-mismatch sweeps, distortion-exponent estimates and the published robustness comparison.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .analytics import mismatch_distortion
from .model import MismatchPoint, ParameterError, SchemeKind, fig4_params, validate
from .montecarlo import SimulationConfig, simulate

log = logging.getLogger(__name__)

ALL_SCHEMES = tuple(SchemeKind)
FIG4_GRID = tuple(float(x) for x in np.linspace(10.0, 50.0, 41))
FIG4_TRIALS = 100_000


class InsufficientSpan(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    snr1a_grid: Sequence[float]
    schemes: Sequence[SchemeKind] = ALL_SCHEMES
    cfg: Optional[SimulationConfig] = None

    def __post_init__(self):
        grid = tuple(float(s) for s in self.snr1a_grid)
        if not grid:
            raise ParameterError("empty SNR grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ParameterError("SNR grid must be strictly increasing")
        object.__setattr__(self, "snr1a_grid", grid)
        object.__setattr__(self, "schemes", tuple(SchemeKind(s) for s in self.schemes))

    def check(self, params):
        # small relative slack so a grid built from P/N1 in floating point is accepted
        if self.snr1a_grid[0] < params.snr1 * (1.0 - 1e-12):
            raise ParameterError(
                f"grid starts at SNR {self.snr1a_grid[0]:.6g}, below the design SNR {params.snr1:.6g}")


@dataclass(frozen=True)
class CurvePoint:
    snr1a: float
    n1a: float
    analytic_d: float
    empirical_d: Optional[float] = None
    std_err: Optional[float] = None
    trials: Optional[int] = None
    seed: Optional[int] = None


@dataclass
class DistortionCurve:
    scheme: SchemeKind
    points: List[CurvePoint] = field(default_factory=list)

    @property
    def snr(self):
        return np.array([p.snr1a for p in self.points])

    @property
    def analytic(self):
        return np.array([p.analytic_d for p in self.points])


def _point(params, snr1a):
    n1a = params.p / snr1a
    # snr1a == design SNR must map back exactly onto the design noise
    if math.isclose(n1a, params.n1, rel_tol=1e-12):
        n1a = params.n1
    return MismatchPoint(n1a)


def run_sweep(params, spec):
    """Analytic (and, with ``spec.cfg``, simulated) distortion of each scheme over the grid.

    A scheme that cannot run at these parameters is logged and left out.
    """
    params = validate(params)
    spec.check(params)
    curves = []
    for scheme in spec.schemes:
        try:
            curve = DistortionCurve(scheme)
            for snr1a in spec.snr1a_grid:
                point = _point(params, snr1a)
                analytic = mismatch_distortion(scheme, params, point)
                if spec.cfg is None:
                    curve.points.append(CurvePoint(snr1a, point.n1a, analytic))
                else:
                    rep = simulate(scheme, params, point, spec.cfg)
                    curve.points.append(CurvePoint(snr1a, point.n1a, analytic, rep.empirical_d,
                                                   rep.std_err, rep.trials, rep.seed))
        except ParameterError as exc:
            log.warning("skipping scheme %s: %s", scheme.value, exc)
            continue
        curves.append(curve)
    return curves


def exponent_grid(lo=1e3, hi=1e6, n=31):
    return np.logspace(math.log10(lo), math.log10(hi), n)


def estimate_exponent(curve):
    """Negated log-log slope of distortion against SNR over the top decade of the curve.

    Raises
    ------
    InsufficientSpan
        If the curve has fewer than 8 points or covers less than 3 decades.
    """
    snr, d = curve.snr, curve.analytic
    if snr.size < 8:
        raise InsufficientSpan(f"need at least 8 points, got {snr.size}")
    decades = math.log10(snr[-1] / snr[0])
    if decades < 3.0 - 1e-9:
        raise InsufficientSpan(f"grid covers {decades:.3g} decades, need at least 3")
    top = snr >= snr[-1] / 10.0 * (1.0 - 1e-12)
    slope = np.polyfit(np.log(snr[top]), np.log(d[top]), 1)[0]
    return -float(slope)


def exponents(params, schemes=ALL_SCHEMES, grid=None):
    """Estimated distortion exponent per scheme on an analytic log-spaced grid."""
    params = validate(params)
    grid = exponent_grid() if grid is None else np.asarray(grid, dtype=float)
    curves = run_sweep(params, SweepSpec(grid, schemes))
    return {c.scheme: (estimate_exponent(c), float(grid[0]), float(grid[-1])) for c in curves}


def fig4_reproduce(params=None, trials=FIG4_TRIALS, seed=0, block_size=None, workers=1):
    """All four schemes over 41 linear SNR values on [10, 50]; ``trials=0`` skips simulation."""
    params = fig4_params() if params is None else validate(params)
    cfg = None
    if trials:
        kw = {} if block_size is None else {"block_size": block_size}
        cfg = SimulationConfig(trials=trials, seed=seed, workers=workers, **kw)
    return run_sweep(params, SweepSpec(FIG4_GRID, ALL_SCHEMES, cfg))
