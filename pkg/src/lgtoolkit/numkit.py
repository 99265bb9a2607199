"""Small dense complex linear algebra helpers.

Everything here works on plain 2-D ``numpy`` arrays of dtype ``complex128``.
Dimensions are tiny (at most a few dozen), so clarity wins over speed.
"""
from __future__ import annotations

import zlib
from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(A) -> np.ndarray:
    """Coerce ``A`` to a finite 2-D complex array (a copy is not forced)."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def _require_square(M: np.ndarray) -> None:
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def multiply(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"dimension mismatch: {A.shape} @ {B.shape}")
    return A @ B


def adjoint(A) -> np.ndarray:
    return as_matrix(A).conj().T


def trace(A) -> complex:
    M = as_matrix(A)
    _require_square(M)
    return complex(np.trace(M))


def tensor(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def anticommutator(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    return A @ B + B @ A


def frobenius(A) -> float:
    return float(np.linalg.norm(as_matrix(A)))


def op_distance(A, B) -> float:
    """Frobenius norm of ``A - B``."""
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    return float(np.linalg.norm(A - B))


def hermiticity_error(H) -> float:
    H = as_matrix(H)
    return op_distance(H, H.conj().T)


def is_hermitian(H, tol: float = HERMITIAN_TOL) -> bool:
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        return False
    return hermiticity_error(H) <= tol * max(1.0, frobenius(H))


def fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero entry is real positive."""
    v = np.asarray(v, dtype=complex)
    nz = np.flatnonzero(np.abs(v) > tol)
    if nz.size == 0:
        return v
    first = v[nz[0]]
    return v * (abs(first) / first)


def hermitian_eig(H) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Each eigenvector carries the phase convention of :func:`fix_phase`.
    """
    H = as_matrix(H)
    _require_square(H)
    if not is_hermitian(H):
        raise ValueError("matrix is not Hermitian")
    # symmetrise so roundoff-level skew parts do not leak into eigh
    w, v = np.linalg.eigh(0.5 * (H + H.conj().T))
    v = np.column_stack([fix_phase(v[:, k]) for k in range(v.shape[1])])
    return EigenDecomposition(w, v)


def psd_sqrt(M) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues with ``|lambda| <= PSD_CLAMP`` are roundoff and set to 0, so
    projectors map to themselves exactly rather than picking up ``sqrt(eps)``.
    """
    w, v = hermitian_eig(M)
    if w.size and w[0] < -PSD_CLAMP:
        raise ValueError(f"matrix has negative eigenvalue {w[0]:.3e}")
    root = np.sqrt(np.where(w <= PSD_CLAMP, 0.0, w))
    return (v * root) @ v.conj().T


def trace_norm(H) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    H = as_matrix(H)
    return float(np.abs(np.linalg.eigvalsh(0.5 * (H + H.conj().T))).sum())


def rng_stream(name: str, seed: int) -> np.random.Generator:
    """Independent, reproducible PRNG stream for ``(name, seed)``.

    The name is hashed into the seed-sequence spawn key so different modules
    using the same user seed never share draws.
    """
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(key,)))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
