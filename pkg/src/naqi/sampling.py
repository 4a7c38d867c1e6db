"""Random states and unitaries for property tests and sweeps."""

from __future__ import annotations

import numpy as np


def random_bloch_vector(rng: np.random.Generator, pure: bool = False) -> np.ndarray:
    """Uniform direction; length 1 when pure, else uniform radius weighting."""
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    if pure:
        return v
    return v * rng.uniform(0.0, 1.0)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state via a normalized complex Gaussian vector."""
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    vec /= np.linalg.norm(vec)
    return np.outer(vec, vec.conj())


def random_mixed_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state mixed with white noise at a uniform weight."""
    w = rng.uniform(0.0, 1.0)
    return (1.0 - w) * random_pure_state(dim, rng) + w * np.eye(dim) / dim


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()
