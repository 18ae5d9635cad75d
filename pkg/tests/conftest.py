"""Shared fixtures and generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from metricembed import validate_metric


@pytest.fixture
def equilateral():
    return validate_metric([[0, 1, 1], [1, 0, 1], [1, 1, 0]])


@pytest.fixture
def star_k13():
    """K_{1,3}: a center at distance 1 from three leaves, leaves pairwise 2.

    Not embeddable in any E^n: three leaves form an equilateral triangle of
    side 2 whose circumradius 2/sqrt(3) exceeds 1, so no Euclidean point is
    at distance 1 from all of them.
    """
    return validate_metric([[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]])


@pytest.fixture
def unit_square():
    s = np.sqrt(2.0)
    return validate_metric([[0, 1, s, 1], [1, 0, 1, s], [s, 1, 0, 1], [1, s, 1, 0]])


def cloud_space(points: np.ndarray):
    """Validated metric space from a Euclidean point cloud."""
    diff = points[:, None, :] - points[None, :, :]
    dm = np.sqrt(np.sum(diff * diff, axis=-1))
    return validate_metric(dm)


def random_cloud(rng: np.random.Generator, n_points: int, dim: int, min_distance: float = 0.1,
                 side: float = 2.0) -> np.ndarray:
    """Point cloud in a cube with a minimum pairwise separation."""
    for _ in range(500):
        pts = rng.uniform(0.0, side, size=(n_points, dim))
        diff = pts[:, None, :] - pts[None, :, :]
        dm = np.sqrt(np.sum(diff * diff, axis=-1))
        np.fill_diagonal(dm, np.inf)
        if np.min(dm) >= min_distance:
            return pts
    raise RuntimeError("could not draw a separated cloud")


def affine_rank(points: np.ndarray, tol: float = 1e-9) -> int:
    centered = points - points.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))
