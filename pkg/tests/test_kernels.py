import numpy as np
import pytest

from securehda import _kernels


@pytest.fixture
def data():
    rng = np.random.default_rng(0)
    obs = rng.standard_normal((3, 10_001))
    target = obs.T @ np.array([0.5, -1.0, 2.0]) + rng.standard_normal(10_001)
    return target, obs, np.array([0.4, -0.9, 2.1])


def reference(target, obs, coeffs):
    e2 = (target - coeffs @ obs) ** 2
    return e2.size, e2.mean(), e2.var() * e2.size


def test_numpy_backend(data):
    n, mean, m2 = _kernels.error_stats_numpy(*data)
    rn, rmean, rm2 = reference(*data)
    assert n == rn
    assert mean == pytest.approx(rmean, rel=1e-13)
    assert m2 == pytest.approx(rm2, rel=1e-12)


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_numba_matches_numpy(data):
    a = _kernels.error_stats_numpy(*data)
    b = _kernels.error_stats_numba(*data)
    assert a[0] == b[0]
    assert b[1] == pytest.approx(a[1], rel=1e-12)
    assert b[2] == pytest.approx(a[2], rel=1e-10)
    x = data[0]
    a = _kernels.square_stats_numpy(x)
    b = _kernels.square_stats_numba(x)
    assert b[1] == pytest.approx(a[1], rel=1e-12)
    assert b[2] == pytest.approx(a[2], rel=1e-10)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_dispatch(backend, data):
    if backend == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    prev = _kernels.set_backend(backend)
    try:
        n, mean, _ = _kernels.error_stats(*data)
    finally:
        _kernels.set_backend(prev)
    assert mean == pytest.approx(reference(*data)[1], rel=1e-12)


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        _kernels.set_backend("cuda")


def test_merge_matches_whole(data):
    target, obs, coeffs = data
    parts = [_kernels.error_stats_numpy(target[i:i + 997], obs[:, i:i + 997], coeffs)
             for i in range(0, target.size, 997)]
    n, mean, m2 = _kernels.merge_stats(parts)
    rn, rmean, rm2 = reference(target, obs, coeffs)
    assert n == rn
    assert mean == pytest.approx(rmean, rel=1e-13)
    assert m2 == pytest.approx(rm2, rel=1e-11)


def test_merge_skips_empty():
    assert _kernels.merge_stats([(0, 0.0, 0.0), (2, 1.0, 0.5)]) == (2, 1.0, 0.5)


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("0", "numba")])
def test_env_flag_selects_backend(flag, expected):
    import os
    import subprocess
    import sys

    if expected == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    env = dict(os.environ, SECUREHDA_DISABLE_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from securehda import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout.strip()
    assert out == expected
