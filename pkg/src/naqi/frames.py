"""Parametrized MUB triples and rank-1 projective qubit measurements.

The triple construction takes a spinor pair at angles (theta1, phi1),

    M1+ = cos(theta1/2)|0> + e^{i phi1} sin(theta1/2)|1>
    M1- = sin(theta1/2)|0> - e^{i phi1} cos(theta1/2)|1>

and derives the other two bases as M2+- = (M1+ +- M1-)/sqrt(2) and
M3+- = (M1+ +- i M1-)/sqrt(2).  Signs and phase placement are kept exactly
as written: the imaginarity measures are sensitive to them.

An optional third angle ``chi`` multiplies M1- by e^{i chi} before M2 and M3
are formed.  With chi = 0 this is exactly the two-parameter construction; the
extra phase extends the family to the full rotation orbit of MUB triples,
which the two-parameter family does not reach (its imaginarity axes are
confined to the equatorial plane).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qmat
from .imaginarity import check_basis

MUB_TOL = 1e-10
UNITARY_TOL = 1e-10


def _spinor_pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    up = np.array([c, e * s], dtype=complex)
    down = np.array([s, -e * c], dtype=complex)
    return up, down


def bloch_axis(theta: float, phi: float) -> np.ndarray:
    """Unit Bloch vector at polar angle theta, azimuth phi."""
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


@dataclass(frozen=True, eq=False)
class MubTriple:
    """Three mutually unbiased qubit bases generated from (theta1, phi1[, chi])."""

    theta1: float
    phi1: float
    chi: float
    bases: tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Three rank-1 projective qubit measurements, one (theta, phi) pair each."""

    angles: tuple[tuple[float, float], ...]
    projectors: tuple[tuple[np.ndarray, np.ndarray], ...] = field(repr=False)


def mub_triple(theta1: float, phi1: float, chi: float = 0.0) -> MubTriple:
    """Build the three-basis MUB family member at the given angles."""
    if not (np.isfinite(theta1) and np.isfinite(phi1) and np.isfinite(chi)):
        raise ValueError("MUB angles must be finite")
    up, down = _spinor_pair(theta1, phi1)
    down = np.exp(1j * chi) * down
    m1 = np.column_stack([up, down])
    m2 = np.column_stack([(up + down) / np.sqrt(2.0), (up - down) / np.sqrt(2.0)])
    m3 = np.column_stack([(up + 1j * down) / np.sqrt(2.0), (up - 1j * down) / np.sqrt(2.0)])
    return MubTriple(theta1=float(theta1), phi1=float(phi1), chi=float(chi), bases=(m1, m2, m3))


def projector_pair(theta: float, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-1 projector pair from the same spinor pattern as the M1 basis."""
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise ValueError("measurement angles must be finite")
    up, down = _spinor_pair(theta, phi)
    return np.outer(up, up.conj()), np.outer(down, down.conj())


def measurement_set(angles) -> MeasurementSet:
    """Three projective measurements from three (theta, phi) pairs."""
    angles = tuple((float(t), float(p)) for t, p in angles)
    if len(angles) != 3:
        raise ValueError("a measurement set consists of exactly three measurements")
    return MeasurementSet(
        angles=angles, projectors=tuple(projector_pair(t, p) for t, p in angles)
    )


def check_mutually_unbiased(bases, tol: float = MUB_TOL) -> tuple[bool, float]:
    """Check |<e_i^a|e_j^b>|^2 = 1/2 for all basis pairs; return worst defect."""
    bases = [check_basis(b) for b in bases]
    worst = 0.0
    for i in range(len(bases)):
        for j in range(len(bases)):
            if i == j:
                continue
            overlaps = np.abs(bases[i].conj().T @ bases[j]) ** 2
            worst = max(worst, float(np.abs(overlaps - 0.5).max()))
    return worst <= tol, worst


def conjugate_frame(triple: MubTriple, v) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Map every basis vector through the unitary ``v``.

    The image of a MUB triple under conjugation is again a MUB triple.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (2, 2) or np.abs(v.conj().T @ v - np.eye(2)).max() > UNITARY_TOL:
        raise ValueError("v must be a 2x2 unitary within 1e-10")
    return tuple(v @ b for b in triple.bases)


def imaginarity_axis(basis) -> np.ndarray:
    """Bloch direction m with imag_l1(rho, basis) = |m . n| for Bloch vector n.

    Conjugating sigma_y into the basis frame gives the axis: for the state
    expressed in ``basis``, the imaginary part of the off-diagonal entry is
    the sigma_y component in that frame.
    """
    basis = check_basis(basis)
    a = basis @ qmat.SIGMA_Y @ basis.conj().T
    return np.array([a[1, 0].real, a[1, 0].imag, a[0, 0].real])


def triple_axes(theta1, phi1, chi=0.0) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form imaginarity axes (m, m_perp) of the triple at given angles.

    Bases M1 and M2 share the axis m (up to sign); M3 carries the orthogonal
    axis m_perp.  Accepts scalars or broadcastable arrays; with array inputs
    the outputs have shape (..., 3).  Matches ``imaginarity_axis`` applied to
    ``mub_triple`` up to an overall sign, which no measure depends on.
    """
    theta1 = np.asarray(theta1, dtype=float)
    phi1 = np.asarray(phi1, dtype=float)
    chi = np.asarray(chi, dtype=float)
    sc, cc = np.sin(chi), np.cos(chi)
    st, ct = np.sin(theta1), np.cos(theta1)
    sp, cp = np.sin(phi1), np.cos(phi1)
    m = np.stack(
        np.broadcast_arrays(sc * ct * cp + cc * sp, sc * ct * sp - cc * cp, -sc * st),
        axis=-1,
    )
    m_perp = np.stack(
        np.broadcast_arrays(-cc * ct * cp + sc * sp, -cc * ct * sp - sc * cp, cc * st),
        axis=-1,
    )
    return m, m_perp
