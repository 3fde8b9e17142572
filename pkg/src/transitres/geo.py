"""Great-circle geometry helpers.

All distances are meters on a sphere of radius EARTH_RADIUS_M; input
coordinates are WGS84 degrees.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

EARTH_RADIUS_M = 6_371_000.0


def haversine(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters between two lat/lon points."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.atan2(math.sqrt(a), math.sqrt(1.0 - a))


def haversine_matrix(lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    """All-pairs great-circle distance matrix (meters) for coordinate arrays."""
    phi = np.radians(np.asarray(lats, dtype=float))
    lam = np.radians(np.asarray(lons, dtype=float))
    dphi = phi[:, None] - phi[None, :]
    dlam = lam[:, None] - lam[None, :]
    a = np.sin(dphi / 2.0) ** 2 + np.cos(phi)[:, None] * np.cos(phi)[None, :] * np.sin(dlam / 2.0) ** 2
    a = np.clip(a, 0.0, 1.0)
    return 2.0 * EARTH_RADIUS_M * np.arctan2(np.sqrt(a), np.sqrt(1.0 - a))


def _unit_sphere_xyz(lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    phi = np.radians(lats)
    lam = np.radians(lons)
    return np.column_stack(
        (np.cos(phi) * np.cos(lam), np.cos(phi) * np.sin(lam), np.sin(phi))
    )


def pairs_within(lats, lons, radius_m: float) -> list[tuple[int, int]]:
    """Index pairs (i < j) whose great-circle distance is <= radius_m.

    Uses a k-d tree on the unit-sphere embedding: the chord length is a
    monotone function of arc length, so a chord-radius query returns exactly
    the wanted pairs. An exact haversine filter removes boundary artifacts
    from floating point.
    """
    lats = np.asarray(lats, dtype=float)
    lons = np.asarray(lons, dtype=float)
    if radius_m < 0 or len(lats) < 2:
        return []
    # chord = 2R sin(arc / 2R); cap the arc at half the circumference
    arc = min(radius_m, math.pi * EARTH_RADIUS_M)
    chord = 2.0 * math.sin(arc / (2.0 * EARTH_RADIUS_M))
    tree = cKDTree(_unit_sphere_xyz(lats, lons))
    candidates = tree.query_pairs(chord * (1.0 + 1e-12), output_type="ndarray")
    out: list[tuple[int, int]] = []
    for i, j in candidates:
        i, j = int(i), int(j)
        if haversine(lats[i], lons[i], lats[j], lons[j]) <= radius_m:
            out.append((i, j) if i < j else (j, i))
    out.sort()
    return out


def pairs_within_bruteforce(lats, lons, radius_m: float) -> list[tuple[int, int]]:
    """O(n^2) reference implementation of pairs_within."""
    n = len(lats)
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if haversine(lats[i], lons[i], lats[j], lons[j]) <= radius_m:
                out.append((i, j))
    return out
