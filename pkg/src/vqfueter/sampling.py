"""Seeded random points and quaternion matrices for the checks."""
from __future__ import annotations

import numpy as np

from .fueter import PointH
from .quat import QMatrix, Quaternion

#: points closer than this to the axis qvec = 0 are rejected
MIN_VEC_NORM = 0.05


def rng_from(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_point(rng, min_vec: float = MIN_VEC_NORM, box: float = 1.0) -> PointH:
    """Uniform in [-box, box]^4, rejected while |qvec| < min_vec."""
    rng = rng_from(rng)
    while True:
        p = rng.uniform(-box, box, 4)
        if np.linalg.norm(p[1:]) >= min_vec:
            return PointH(*(float(v) for v in p))


def random_ball_point(rng, radius: float, min_vec: float = MIN_VEC_NORM) -> PointH:
    """Uniform in the ball |q| < radius (rejection from the cube)."""
    rng = rng_from(rng)
    while True:
        p = rng.uniform(-radius, radius, 4)
        if np.linalg.norm(p) < radius and np.linalg.norm(p[1:]) >= min_vec:
            return PointH(*(float(v) for v in p))


def random_quaternion(rng, scale: float = 1.0) -> Quaternion:
    return Quaternion(*rng_from(rng).normal(0.0, scale, 4))


def random_qmatrix(rng, rows: int, cols: int, scale: float = 1.0) -> QMatrix:
    return QMatrix(rng_from(rng).normal(0.0, scale, (rows, cols, 4)))
