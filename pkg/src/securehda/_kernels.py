"""
Per-block reduction kernels for the Monte-Carlo engine.

Two interchangeable backends: numba-compiled loops and plain numpy. The numba
backend is used when numba imports and ``SECUREHDA_DISABLE_NUMBA`` is unset
(or "0"). Both return ``(count, mean, m2)`` Welford triples; they agree to
rounding but are not bit-identical to each other.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None

_DISABLE = os.environ.get("SECUREHDA_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")
HAVE_NUMBA = numba is not None


def _error_stats_py(target, obs, coeffs):
    n = target.shape[0]
    d = obs.shape[0]
    mean = 0.0
    m2 = 0.0
    for i in range(n):
        est = 0.0
        for j in range(d):
            est += coeffs[j] * obs[j, i]
        e = target[i] - est
        e2 = e * e
        delta = e2 - mean
        mean += delta / (i + 1)
        m2 += delta * (e2 - mean)
    return n, mean, m2


def _square_stats_py(x):
    n = x.shape[0]
    mean = 0.0
    m2 = 0.0
    for i in range(n):
        s = x[i] * x[i]
        delta = s - mean
        mean += delta / (i + 1)
        m2 += delta * (s - mean)
    return n, mean, m2


def error_stats_numpy(target, obs, coeffs):
    """Welford triple of the squared error ``(target - coeffs @ obs)**2``."""
    e2 = np.square(target - coeffs @ obs)
    mean = float(e2.mean())
    return e2.shape[0], mean, float(np.square(e2 - mean).sum())


def square_stats_numpy(x):
    s = np.square(x)
    mean = float(s.mean())
    return s.shape[0], mean, float(np.square(s - mean).sum())


if HAVE_NUMBA:
    error_stats_numba = numba.njit(cache=True, nogil=True, fastmath=False)(_error_stats_py)
    square_stats_numba = numba.njit(cache=True, nogil=True, fastmath=False)(_square_stats_py)
else:  # pragma: no cover
    error_stats_numba = None
    square_stats_numba = None

BACKEND = "numba" if HAVE_NUMBA and not _DISABLE else "numpy"


def set_backend(name):
    """Switch the active backend ("numba" or "numpy") and return the previous one."""
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    prev, BACKEND = BACKEND, name
    return prev


def error_stats(target, obs, coeffs):
    if BACKEND == "numba":
        n, mean, m2 = error_stats_numba(target, np.ascontiguousarray(obs), np.ascontiguousarray(coeffs))
        return int(n), float(mean), float(m2)
    return error_stats_numpy(target, obs, coeffs)


def square_stats(x):
    if BACKEND == "numba":
        n, mean, m2 = square_stats_numba(x)
        return int(n), float(mean), float(m2)
    return square_stats_numpy(x)


def merge_stats(parts):
    """Combine Welford triples in the given order (Chan et al. pairwise update)."""
    n_tot, mean_tot, m2_tot = 0, 0.0, 0.0
    for n, mean, m2 in parts:
        if n == 0:
            continue
        n_new = n_tot + n
        delta = mean - mean_tot
        mean_tot += delta * n / n_new
        m2_tot += m2 + delta * delta * n_tot * n / n_new
        n_tot = n_new
    return n_tot, mean_tot, m2_tot
