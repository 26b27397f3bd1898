"""Seeded generators for the approximation families used in sweeps."""

from __future__ import annotations

import numpy as np

from .constructions import Perturbation, zero_outside
from .hadamard import SignMatrix


def rowspace_projection(H: SignMatrix, r: int, rng) -> np.ndarray:
    """``H`` with every row projected onto a random ``r``-dim subspace."""
    n = H.n
    Q, _ = np.linalg.qr(rng.standard_normal((n, r)))
    return H.to_real() @ Q @ Q.T


def random_zero_outside(H: SignMatrix, rng):
    """Zero-outside embedding of a uniformly random nonempty submatrix."""
    n = H.n
    while True:
        rows = np.flatnonzero(rng.random(n) < 0.5)
        cols = np.flatnonzero(rng.random(n) < 0.5)
        if rows.size and cols.size:
            break
    M, pert = zero_outside(H, rows.tolist(), cols.tolist())
    return M, pert, rows, cols


def theta_perturbation(H: SignMatrix, theta: float, rng, weight: int | None = None) -> Perturbation:
    """Random changes of size at most ``theta``; about a third hit the cap exactly."""
    n = H.n
    if weight is None:
        weight = int(rng.integers(1, n * n + 1))
    flat = rng.choice(n * n, size=weight, replace=False)
    changes = []
    for f in flat:
        i, j = divmod(int(f), n)
        u = rng.uniform(-1.0, 1.0)
        if rng.random() < 1 / 3:
            u = 1.0 if u >= 0 else -1.0
        if u == 0:
            u = 1.0
        changes.append((i, j, float(H.data[i, j] + theta * u)))
    return Perturbation(n, tuple(changes), theta)
