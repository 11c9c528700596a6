import os
import subprocess
import sys

import numpy as np
import pytest

from spreadlens import kernels

from oracles import haversine_scalar


def _random_coords(rng, n):
    return (
        rng.uniform(-25.0, -20.0, size=n),
        rng.uniform(-53.0, -44.0, size=n),
    )


def test_numpy_path_matches_scalar_reference():
    rng = np.random.default_rng(1)
    lat, lon = _random_coords(rng, 40)
    d = kernels.pairwise_haversine_numpy(np.radians(lat), np.radians(lon))
    for i in range(0, 40, 7):
        for j in range(0, 40, 5):
            expected = haversine_scalar(lat[i], lon[i], lat[j], lon[j])
            assert d[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-9)


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba backend not active")
def test_numba_and_numpy_backends_agree():
    rng = np.random.default_rng(2)
    lat, lon = _random_coords(rng, 120)
    lat_r, lon_r = np.radians(lat), np.radians(lon)
    a = kernels.pairwise_haversine_numba(lat_r, lon_r)
    b = kernels.pairwise_haversine_numpy(lat_r, lon_r)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-9)


def test_env_flag_selects_numpy_fallback():
    env = dict(os.environ, SPREADLENS_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from spreadlens.kernels import active_backend; print(active_backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_dispatcher_reports_its_backend():
    assert kernels.active_backend() in ("numba", "numpy")


def test_knn_indices_orders_by_distance_then_index():
    d = np.array([
        [0.0, 1.0, 1.0, 3.0],
        [1.0, 0.0, 2.0, 2.0],
        [1.0, 2.0, 0.0, 5.0],
        [3.0, 2.0, 5.0, 0.0],
    ])
    nn = kernels.knn_indices(d, 2)
    assert nn.tolist() == [[1, 2], [0, 2], [0, 1], [1, 0]]


def test_knn_indices_degenerate_sizes():
    d = np.zeros((1, 1))
    assert kernels.knn_indices(d, 3).shape == (1, 0)


def test_window_totals_counts_first_day_inside():
    daily = np.array([[2, 3, 0, 5], [1, 1, 1, 1]], dtype=np.int64)
    cum = np.cumsum(daily, axis=1)
    assert kernels.window_totals(cum, 0, 3).tolist() == [10, 4]
    assert kernels.window_totals(cum, 1, 2).tolist() == [3, 2]
    assert kernels.window_totals(cum, 3, 3).tolist() == [5, 1]
