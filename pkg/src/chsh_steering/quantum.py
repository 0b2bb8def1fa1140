"""Two-qubit linear algebra: Pauli operators, Kronecker products and states.

Matrices are plain ``numpy`` complex arrays. The computational basis is
ordered |00>, |01>, |10>, |11> (Alice is the first tensor factor).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
BLOCH_NORM_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SX, SY, SZ])

SQRT2 = math.sqrt(2.0)
TSIRELSON = 2.0 * SQRT2


class StateError(ValueError):
    """Raised when a matrix is not a valid two-qubit density matrix."""


def bloch_vector(v, *, unit: bool = False, tol: float = BLOCH_NORM_TOL) -> np.ndarray:
    """Coerce ``v`` to a length-3 float array and check its norm.

    With ``unit=True`` the norm must be 1 within ``tol``; otherwise it must
    not exceed 1 + ``tol``.
    """
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"expected three finite components, got {v!r}")
    norm = float(np.linalg.norm(arr))
    if unit and abs(norm - 1.0) > tol:
        raise ValueError(f"expected a unit vector, got norm {norm:.12g}")
    if not unit and norm > 1.0 + tol:
        raise ValueError(f"Bloch vector norm {norm:.12g} exceeds 1")
    return arr


def pauli_dot(v) -> np.ndarray:
    """Return v_x X + v_y Y + v_z Z."""
    v = np.asarray(v, dtype=float)
    return np.tensordot(v, PAULIS, axes=1)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def partial_trace_alice(rho: np.ndarray) -> np.ndarray:
    """Trace out the first qubit of a 4x4 operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    return np.einsum("ajak->jk", rho.reshape(2, 2, 2, 2))


def partial_trace_bob(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.einsum("ajbj->ab", rho.reshape(2, 2, 2, 2))


def qubit_state(r) -> np.ndarray:
    """Single-qubit density matrix (I + r.sigma)/2 for a Bloch vector ``r``."""
    return 0.5 * (I2 + pauli_dot(bloch_vector(r)))


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """Validated 4x4 density matrix.

    The stored array is read-only, so instances can be shared freely
    between workers.
    """

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise StateError(f"density matrix must be 4x4, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise StateError("density matrix has non-finite entries")
        if not is_hermitian(rho):
            raise StateError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > TRACE_TOL:
            raise StateError(f"trace is {tr.real:.12g}, expected 1")
        lo = float(np.linalg.eigvalsh(rho).min())
        if lo < -PSD_TOL:
            raise StateError(f"density matrix has negative eigenvalue {lo:.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    def expectation(self, op: np.ndarray) -> float:
        return float(np.real(np.trace(op @ self.rho)))

    def correlation_matrix(self) -> np.ndarray:
        """T[i, j] = <sigma_i (x) sigma_j>, the 3x3 real correlation matrix."""
        return np.real(
            np.einsum("iab,jcd,bdac->ij", PAULIS, PAULIS, self.rho.reshape(2, 2, 2, 2))
        )

    def local_bloch(self) -> tuple[np.ndarray, np.ndarray]:
        """Bloch vectors of Alice's and Bob's reduced states."""
        ra = np.real(np.einsum("iab,ba->i", PAULIS, partial_trace_bob(self.rho)))
        rb = np.real(np.einsum("iab,ba->i", PAULIS, partial_trace_alice(self.rho)))
        return ra, rb

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def transformed(self, u: np.ndarray, v: np.ndarray) -> "TwoQubitState":
        """Apply the local unitary U (x) V."""
        w = np.kron(u, v)
        rho = w @ self.rho @ w.conj().T
        return TwoQubitState(0.5 * (rho + rho.conj().T))

    @classmethod
    def from_vector(cls, psi) -> "TwoQubitState":
        psi = np.asarray(psi, dtype=complex).reshape(4)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise StateError("zero state vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))


def _check_unit_interval(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def pure_schmidt_state(a: float) -> TwoQubitState:
    """a|00> + b|11> with b = sqrt(1 - a^2) and a, b real, nonnegative."""
    a = _check_unit_interval("a", a)
    b = np.sqrt(max(0.0, 1.0 - a * a))
    return TwoQubitState.from_vector([a, 0.0, 0.0, b])


def singlet() -> TwoQubitState:
    return TwoQubitState.from_vector(np.array([0.0, 1.0, -1.0, 0.0]) / SQRT2)


def phi_plus() -> TwoQubitState:
    return pure_schmidt_state(1.0 / SQRT2)


def werner_state(w: float) -> TwoQubitState:
    """w |psi-><psi-| + (1 - w) I/4."""
    w = _check_unit_interval("w", w)
    return TwoQubitState(w * singlet().rho + (1.0 - w) * np.eye(4) / 4.0)


def product_state(ra, rb) -> TwoQubitState:
    return TwoQubitState(np.kron(qubit_state(ra), qubit_state(rb)))


def random_pure_state(rng: np.random.Generator) -> TwoQubitState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    return TwoQubitState.from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))


def random_mixed_state(rng: np.random.Generator, rank: int = 4) -> TwoQubitState:
    """Wishart-style random state G G^dagger / Tr(G G^dagger)."""
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return TwoQubitState(rho / np.trace(rho).real)


def random_unitary(rng: np.random.Generator) -> np.ndarray:
    """Haar-random 2x2 unitary via QR of a complex Gaussian matrix."""
    z = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
