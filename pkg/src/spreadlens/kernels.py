"""Numeric hot kernels: pairwise great-circle distances and window totals.

Kernels are JIT-compiled with numba when it is importable. Setting the
environment variable ``SPREADLENS_DISABLE_NUMBA=1`` (checked once, at import
time) forces the pure-numpy path, which is also the automatic fallback when
numba is missing. ``benchmarks/kernel_bench.py`` compares the two backends.
"""

from __future__ import annotations

import os

import numpy as np

EARTH_RADIUS_KM = 6371.0

_FALSY = ("", "0", "false", "no")


def _numba_enabled() -> bool:
    return os.environ.get("SPREADLENS_DISABLE_NUMBA", "").strip().lower() in _FALSY


def pairwise_haversine_numpy(lat_rad: np.ndarray, lon_rad: np.ndarray) -> np.ndarray:
    """Full symmetric distance matrix (km) from radian coordinate vectors."""
    lat = lat_rad[:, None]
    lon = lon_rad[:, None]
    sin_dlat = np.sin((lat_rad[None, :] - lat) / 2.0)
    sin_dlon = np.sin((lon_rad[None, :] - lon) / 2.0)
    a = sin_dlat**2 + np.cos(lat) * np.cos(lat_rad[None, :]) * sin_dlon**2
    d = 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))
    np.fill_diagonal(d, 0.0)
    return d


HAS_NUMBA = False
if _numba_enabled():
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:
        HAS_NUMBA = False

if HAS_NUMBA:

    @njit(cache=True)
    def pairwise_haversine_numba(lat_rad, lon_rad):  # pragma: no cover - jitted
        n = lat_rad.shape[0]
        out = np.empty((n, n), dtype=np.float64)
        for i in range(n):
            out[i, i] = 0.0
            for j in range(i + 1, n):
                sdlat = np.sin((lat_rad[j] - lat_rad[i]) / 2.0)
                sdlon = np.sin((lon_rad[j] - lon_rad[i]) / 2.0)
                a = sdlat * sdlat + np.cos(lat_rad[i]) * np.cos(lat_rad[j]) * sdlon * sdlon
                if a > 1.0:
                    a = 1.0
                elif a < 0.0:
                    a = 0.0
                d = 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(a))
                out[i, j] = d
                out[j, i] = d
        return out

else:
    pairwise_haversine_numba = None


def pairwise_distance_km(lat_deg: np.ndarray, lon_deg: np.ndarray) -> np.ndarray:
    """Dispatch to the active backend. Inputs are decimal-degree vectors."""
    lat = np.radians(np.asarray(lat_deg, dtype=np.float64))
    lon = np.radians(np.asarray(lon_deg, dtype=np.float64))
    if HAS_NUMBA:
        return pairwise_haversine_numba(lat, lon)
    return pairwise_haversine_numpy(lat, lon)


def knn_indices(distances: np.ndarray, k: int) -> np.ndarray:
    """Per-row indices of the k nearest other rows, ascending distance.

    Ties resolve to the lower index; callers keep rows sorted by city name so
    that the tie-break is lexicographic. Returns shape (n, min(k, n-1)).
    """
    n = distances.shape[0]
    k_eff = min(k, n - 1)
    if k_eff <= 0:
        return np.empty((n, 0), dtype=np.int64)
    order = np.argsort(distances, axis=1, kind="stable")
    out = np.empty((n, k_eff), dtype=np.int64)
    for i in range(n):
        row = order[i]
        out[i] = row[row != i][:k_eff]
    return out


def window_totals(cum: np.ndarray, a_idx: int, b_idx: int) -> np.ndarray:
    """Per-city accumulated-in-window totals from a cumulative matrix.

    ``cum`` is (n_cities, n_days) of running totals; the window covers day
    indices [a_idx, b_idx] inclusive and day a_idx counts inside the window.
    """
    base = cum[:, a_idx - 1] if a_idx > 0 else 0
    return cum[:, b_idx] - base


def active_backend() -> str:
    return "numba" if HAS_NUMBA else "numpy"
