"""
System parameters for the Gaussian wiretap channel with receiver side information.

All quantities are linear (variances, not dB). Rates are in bits per real
channel use. The bandwidth ratio between channel uses and source samples is
fixed to one.
"""

import enum
import math
from dataclasses import dataclass, fields
from pathlib import Path


class ParameterError(ValueError):
    """Base class for invalid system parameters or inputs."""


class NonPositiveParameter(ParameterError):
    pass


class DegradednessViolation(ParameterError):
    pass


class SideInfoVarianceViolation(ParameterError):
    pass


class RateOutOfRange(ParameterError):
    pass


class LeakageBudgetExceedsPower(ParameterError):
    pass


class BelowDesignThreshold(ParameterError):
    """Actual main-channel noise is worse than the design noise."""


class ConfigError(ParameterError):
    pass


class SchemeKind(enum.Enum):
    SEPARATION = "separation"
    UNCODED = "uncoded"
    HYBRID = "hybrid"
    SUPERIMPOSED = "superimposed"

    @classmethod
    def parse(cls, name):
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ParameterError(f"unknown scheme {name!r} (expected one of {valid})") from None


CONFIG_KEYS = ("p", "n1", "n2", "sigma_v2", "sigma_t2", "i_eps", "rate_r")


def wiretap_capacity(p, n1, n2):
    """Secrecy capacity 0.5*log2((1 + p/n1) / (1 + p/n2)) of the degraded Gaussian wiretap channel.

    Written through log1p so that it stays strictly positive whenever n2 > n1.
    """
    return 0.5 * math.log1p(p * (n2 - n1) / (n1 * (p + n2))) / math.log(2.0)


@dataclass(frozen=True)
class SystemParams:
    """Raw, unchecked parameters. Use :func:`validate` before computing anything."""

    p: float
    n1: float
    n2: float
    sigma_v2: float
    sigma_t2: float
    i_eps: float = 0.0
    rate_r: float = 0.0
    rho: float = 1.0

    def replace(self, **changes):
        values = {f.name: getattr(self, f.name) for f in fields(SystemParams)}
        values.update(changes)
        return SystemParams(**values)


@dataclass(frozen=True)
class ValidatedParams(SystemParams):
    """Parameters that passed :func:`validate`. Not constructible directly."""

    def __init__(self, *args, **kwargs):
        raise TypeError("ValidatedParams can only be obtained from validate()")

    @property
    def sigma_vp2(self):
        """Variance of the side information V' (source variance minus innovation variance)."""
        return self.sigma_v2 - self.sigma_t2

    @property
    def snr1(self):
        return self.p / self.n1

    @property
    def snr2(self):
        return self.p / self.n2

    @property
    def capacity(self):
        return wiretap_capacity(self.p, self.n1, self.n2)

    def replace(self, **changes):
        return validate(SystemParams.replace(self, **changes))


def validate(params):
    """Check every parameter invariant and return a :class:`ValidatedParams`.

    Idempotent: a ``ValidatedParams`` is returned unchanged.

    Raises
    ------
    NonPositiveParameter, DegradednessViolation, SideInfoVarianceViolation, RateOutOfRange
    """
    if isinstance(params, ValidatedParams):
        return params

    for name in ("p", "n1", "n2", "sigma_v2", "sigma_t2"):
        value = getattr(params, name)
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveParameter(f"{name} must be finite and > 0, got {value!r}")
    if params.rho != 1.0:
        raise ParameterError(f"only rho = 1 is supported, got {params.rho!r}")
    if not params.n2 > params.n1:
        raise DegradednessViolation(
            f"eavesdropper must be degraded: need n2 > n1, got n1={params.n1!r}, n2={params.n2!r}")
    if not params.sigma_t2 < params.sigma_v2:
        raise SideInfoVarianceViolation(
            f"need sigma_t2 < sigma_v2, got sigma_t2={params.sigma_t2!r}, sigma_v2={params.sigma_v2!r}")
    if not (math.isfinite(params.i_eps) and params.i_eps >= 0):
        raise NonPositiveParameter(f"i_eps must be finite and >= 0, got {params.i_eps!r}")
    cap = wiretap_capacity(params.p, params.n1, params.n2)
    if not (0.0 <= params.rate_r <= cap):
        raise RateOutOfRange(f"rate_r must lie in [0, C={cap:.12g}], got {params.rate_r!r}")

    out = object.__new__(ValidatedParams)
    for f in fields(SystemParams):
        object.__setattr__(out, f.name, float(getattr(params, f.name)))
    return out


@dataclass(frozen=True)
class MismatchPoint:
    """Actual main-channel noise variance seen by the legitimate receiver."""

    n1a: float

    def __post_init__(self):
        if not (math.isfinite(self.n1a) and self.n1a > 0):
            raise NonPositiveParameter(f"n1a must be finite and > 0, got {self.n1a!r}")

    @classmethod
    def from_snr(cls, params, snr1a):
        if not snr1a > 0:
            raise NonPositiveParameter(f"snr1a must be > 0, got {snr1a!r}")
        return cls(params.p / snr1a)

    @classmethod
    def design(cls, params):
        return cls(params.n1)


def check_mismatch(params, point):
    """Raise :class:`BelowDesignThreshold` unless ``point.n1a <= params.n1``."""
    if point.n1a > params.n1:
        raise BelowDesignThreshold(
            f"actual noise n1a={point.n1a!r} exceeds design noise n1={params.n1!r}")


def fig4_params():
    """Operating point of the published robustness comparison (design SNR 10)."""
    return validate(SystemParams(p=10.0, n1=1.0, n2=10.0 / 7.0, sigma_v2=8.0, sigma_t2=5.0,
                                 i_eps=0.2, rate_r=0.15))


def parse_config(text, source="<config>"):
    """Parse ``key=value`` lines into a dict of floats.

    Blank lines and lines starting with ``#`` are ignored. Unknown or repeated
    keys raise :class:`ConfigError`.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val.strip())
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: value for {key!r} is not a number: {val.strip()!r}") from None
    return values


def params_from_mapping(values):
    missing = [k for k in CONFIG_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    return SystemParams(**{k: values[k] for k in CONFIG_KEYS})


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror}") from None
    return params_from_mapping(parse_config(text, source=str(path)))


def format_config(params):
    return "".join(f"{k}={getattr(params, k)!r}\n" for k in CONFIG_KEYS)
