"""Imaginarity measures of qubit states in an arbitrary reference basis.

A reference basis is a 2x2 complex unitary whose *columns* are the basis
vectors, phases included.  The measures depend on those phases, so bases are
never re-phased or canonicalized here.

Two measures are provided:

* l1 norm: sum of |Im| over all entries of the state expressed in the basis;
* relative entropy: S(Delta(rho)) - S(rho), where Delta averages the state
  with its transpose taken in the basis.

All entropies use log base 2.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from . import qmat

BASIS_TOL = 1e-12
REL_ENTROPY_NEGATIVE_TOL = 1e-9


class Measure(str, enum.Enum):
    """The two imaginarity quantifiers used throughout the library."""

    L1 = "l1"
    RELATIVE_ENTROPY = "r"


def computational_basis() -> np.ndarray:
    """The z eigenbasis {|0>, |1>} as a basis matrix."""
    return np.eye(2, dtype=complex)


def check_basis(basis) -> np.ndarray:
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (2, 2):
        raise ValueError("a qubit basis must be a 2x2 matrix of column vectors")
    gram = basis.conj().T @ basis
    if np.abs(gram - np.eye(2)).max() > BASIS_TOL:
        raise ValueError("basis vectors are not orthonormal within 1e-12")
    return basis


def _in_basis(rho, basis) -> np.ndarray:
    """Entries <e_a| rho |e_b> of the state in the given basis."""
    return basis.conj().T @ np.asarray(rho, dtype=complex) @ basis


def real_part_map(rho, basis) -> np.ndarray:
    """Average the state with its transpose taken in ``basis``.

    The result is expressed back in the computational basis and is itself a
    valid density matrix (the imaginary parts of the entries in ``basis`` are
    removed).
    """
    basis = check_basis(basis)
    b = _in_basis(rho, basis)
    delta = 0.5 * (b + b.T)
    return basis @ delta @ basis.conj().T


def imag_l1(rho, basis) -> float:
    """Sum of absolute imaginary parts of the state's entries in ``basis``."""
    basis = check_basis(basis)
    return float(np.abs(_in_basis(rho, basis).imag).sum())


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x), with H(0) = H(1) = 0."""
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def von_neumann_entropy(rho) -> float:
    """-sum lambda log2 lambda over the spectrum, with 0 log 0 = 0.

    Eigenvalues are clamped into [0, 1] to absorb floating-point noise on
    valid states.
    """
    eigs = np.clip(qmat.hermitian_eigenvalues(rho), 0.0, 1.0)
    out = 0.0
    for lam in eigs:
        if lam > 0.0:
            out -= lam * math.log2(lam)
    return out


def imag_rel_entropy(rho, basis) -> float:
    """S(Delta(rho)) - S(rho) with the transpose taken in ``basis``."""
    diff = von_neumann_entropy(real_part_map(rho, basis)) - von_neumann_entropy(rho)
    if diff < -REL_ENTROPY_NEGATIVE_TOL:
        raise ValueError(
            f"relative entropy of imaginarity came out {diff:.3e} < 0; "
            "the input is not a valid state"
        )
    return max(diff, 0.0)


def imag_measure(measure: Measure | str, rho, basis) -> float:
    """Dispatch on the measure tag."""
    measure = Measure(measure)
    if measure is Measure.L1:
        return imag_l1(rho, basis)
    return imag_rel_entropy(rho, basis)
