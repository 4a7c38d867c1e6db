"""Dense complex-matrix core for 1-3 qubit density matrices.

Everything here operates on plain ``numpy`` arrays of complex entries.
States are dense square matrices of dimension 2, 4 or 8; composite systems
are ordered A (x) B (x) C with computational labels |000>, |001>, ..., |111>.
All functions are pure; arrays are never mutated in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

MAX_DIM = 8

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# SWAP on two qubits in the computational basis (|ab> -> |ba>)
SWAP_2Q = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)


class TwoQubitPauliForm(NamedTuple):
    """Correlation data of a two-qubit state: local Bloch vectors and T matrix."""

    r: np.ndarray  # Alice local Bloch vector, shape (3,)
    s: np.ndarray  # Bob local Bloch vector, shape (3,)
    T: np.ndarray  # correlation matrix T[j, k] = Tr(rho sigma_j (x) sigma_k), shape (3, 3)


@dataclass(frozen=True)
class StateDiagnostics:
    """Defects of a candidate density matrix against the state invariants."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_defect <= HERMITICITY_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= -PSD_TOL
        )


def _as_square(m, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two square matrices, capped at dimension 8."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise ValueError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds the "
            f"supported maximum {MAX_DIM}"
        )
    return np.kron(a, b)


def partial_trace(rho, keep: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in order; their product must equal
    the dimension of ``rho``.  ``keep`` must be strictly increasing: the kept
    subsystems come out in their original order.
    """
    rho = _as_square(rho, "rho")
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError("subsystem dimensions must be positive")
    total = int(np.prod(dims))
    if total != rho.shape[0]:
        raise ValueError(
            f"product of dims {dims} is {total}, but rho has dimension {rho.shape[0]}"
        )
    keep = [int(k) for k in keep]
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    if sorted(keep) != keep or len(set(keep)) != len(keep):
        raise ValueError("keep must be strictly increasing (original subsystem order)")

    n = len(dims)
    work = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    for idx in sorted(traced, reverse=True):
        work = np.trace(work, axis1=idx, axis2=idx + (work.ndim // 2))
    kept_dim = int(np.prod([dims[k] for k in keep]))
    return work.reshape(kept_dim, kept_dim)


def swap_parties(rho_ab) -> np.ndarray:
    """Exchange the two qubits of a two-qubit state."""
    rho_ab = _as_square(rho_ab, "rho_ab")
    if rho_ab.shape[0] != 4:
        raise ValueError("swap_parties expects a 4x4 matrix")
    return SWAP_2Q @ rho_ab @ SWAP_2Q


def bloch_to_density(n) -> np.ndarray:
    """Qubit state (I + n . sigma) / 2 from a Bloch vector inside the unit ball."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ValueError("Bloch vector must have exactly 3 real components")
    norm2 = float(n @ n)
    if norm2 > 1.0 + 2e-9:
        raise ValueError(f"Bloch vector length {np.sqrt(norm2):.12f} exceeds 1")
    return 0.5 * (IDENTITY_2 + n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z)


def density_to_bloch(rho) -> np.ndarray:
    """Bloch components n_k = Tr(rho sigma_k) of a qubit state."""
    rho = _as_square(rho, "rho")
    if rho.shape[0] != 2:
        raise ValueError("density_to_bloch expects a 2x2 matrix")
    return np.array(
        [
            2.0 * rho[1, 0].real,
            2.0 * rho[1, 0].imag,
            (rho[0, 0] - rho[1, 1]).real,
        ]
    )


def pauli_decompose(rho_ab) -> TwoQubitPauliForm:
    """Local Bloch vectors and correlation matrix of a two-qubit state."""
    rho = _as_square(rho_ab, "rho_ab")
    if rho.shape[0] != 4:
        raise ValueError("pauli_decompose expects a 4x4 matrix")
    r = np.empty(3)
    s = np.empty(3)
    T = np.empty((3, 3))
    for j, pj in enumerate(PAULIS):
        r[j] = np.trace(np.kron(pj, IDENTITY_2) @ rho).real
        s[j] = np.trace(np.kron(IDENTITY_2, pj) @ rho).real
        for k, pk in enumerate(PAULIS):
            T[j, k] = np.trace(np.kron(pj, pk) @ rho).real
    return TwoQubitPauliForm(r=r, s=s, T=T)


def pauli_reconstruct(form: TwoQubitPauliForm) -> np.ndarray:
    """Rebuild the two-qubit state from its Pauli form."""
    rho = np.kron(IDENTITY_2, IDENTITY_2).astype(complex)
    for j, pj in enumerate(PAULIS):
        rho += form.r[j] * np.kron(pj, IDENTITY_2)
        rho += form.s[j] * np.kron(IDENTITY_2, pj)
        for k, pk in enumerate(PAULIS):
            rho += form.T[j, k] * np.kron(pj, pk)
    return rho / 4.0


def hermiticity_defect(m) -> float:
    m = _as_square(m)
    return float(np.abs(m - m.conj().T).max())


def hermitian_eigenvalues(h) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, sorted in descending order.

    The 2x2 case uses the closed trace/determinant form; larger matrices go
    through an iterative Hermitian diagonalization.
    """
    h = _as_square(h, "h")
    defect = hermiticity_defect(h)
    if defect > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian (max defect {defect:.3e})")
    if h.shape[0] == 2:
        half_tr = 0.5 * (h[0, 0] + h[1, 1]).real
        det = (h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]).real
        disc = np.sqrt(max(half_tr * half_tr - det, 0.0))
        return np.array([half_tr + disc, half_tr - disc])
    return np.linalg.eigvalsh(h)[::-1].copy()


def validate_state(rho) -> StateDiagnostics:
    """Diagnose Hermiticity, trace and positivity of a candidate state."""
    rho = _as_square(rho, "rho")
    defect = hermiticity_defect(rho)
    trace_defect = abs(np.trace(rho) - 1.0)
    sym = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(sym).min())
    return StateDiagnostics(
        hermiticity_defect=float(defect),
        trace_defect=float(trace_defect),
        min_eigenvalue=min_eig,
    )


def density_matrix(entries) -> np.ndarray:
    """Construct a validated density matrix, symmetrized once via (M + M^dag) / 2.

    Raises ``ValueError`` when any state invariant fails; after construction
    no further silent symmetrization is applied anywhere in the library.
    """
    rho = _as_square(entries, "entries")
    if rho.shape[0] not in (2, 4, 8):
        raise ValueError(f"supported state dimensions are 2, 4, 8; got {rho.shape[0]}")
    diag = validate_state(rho)
    if not diag.ok:
        raise ValueError(
            "invalid density matrix: "
            f"hermiticity defect {diag.hermiticity_defect:.3e}, "
            f"trace defect {diag.trace_defect:.3e}, "
            f"min eigenvalue {diag.min_eigenvalue:.3e}"
        )
    return 0.5 * (rho + rho.conj().T)
