"""Quasi-random sample points in a disk."""
from __future__ import annotations

import os

import numpy as np
from scipy.stats import qmc

SEED_ENV = "HARMONIC_RADIUS_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def disk_points(n: int, r_max: float, seed: int | None = None, r_min: float = 0.0) -> np.ndarray:
    """``n`` area-uniform scrambled Halton points in r_min <= |z| <= r_max."""
    if seed is None:
        seed = default_seed()
    u = qmc.Halton(d=2, scramble=True, seed=seed).random(n)
    rho = np.sqrt(r_min**2 + (r_max**2 - r_min**2) * u[:, 0])
    return rho * np.exp(2j * np.pi * u[:, 1])
