"""States, two-outcome observables, POVMs and instruments.

Outcome labels are ``a in {0, 1}`` and map to eigenvalues ``(-1)**a``.
Measurement inputs are labelled ``x = 1..n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import numkit as nk

FULL_RANK_THRESHOLD = 1e-8
FULL_RANK_MIXING = 1e-2


@dataclass(frozen=True, eq=False)
class DensityState:
    """Positive, unit-trace density matrix."""

    matrix: np.ndarray
    min_eigenvalue: float = field(init=False)

    def __post_init__(self):
        rho = nk.as_matrix(self.matrix).copy()
        if rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise ValueError(f"density matrix must be square and non-empty, got {rho.shape}")
        if nk.hermiticity_error(rho) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"density matrix has trace {tr!r}, expected 1")
        lam_min = float(np.linalg.eigvalsh(rho)[0])
        if lam_min < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3e}")
        rho.setflags(write=False)
        object.__setattr__(self, "matrix", rho)
        object.__setattr__(self, "min_eigenvalue", lam_min)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def full_rank(self) -> bool:
        return self.min_eigenvalue > FULL_RANK_THRESHOLD

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def expect(self, op) -> float:
        """Real part of ``Tr(op rho)``."""
        return float(np.trace(nk.as_matrix(op) @ self.matrix).real)

    @classmethod
    def from_vector(cls, psi) -> "DensityState":
        psi = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ValueError("zero vector")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """Hermitian involution ``A = Pi_0 - Pi_1``."""

    matrix: np.ndarray
    projectors: tuple = field(init=False)

    def __post_init__(self):
        A = nk.as_matrix(self.matrix).copy()
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"observable must be square, got {A.shape}")
        if not nk.is_hermitian(A):
            raise ValueError("observable is not Hermitian")
        A = 0.5 * (A + A.conj().T)
        d = A.shape[0]
        if nk.op_distance(A @ A, np.eye(d)) > 1e-9:
            raise ValueError("observable does not square to the identity")
        w, v = nk.hermitian_eig(A)
        plus = v[:, w > 0]
        minus = v[:, w <= 0]
        p0 = plus @ plus.conj().T
        p1 = minus @ minus.conj().T
        for M in (A, p0, p1):
            M.setflags(write=False)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "projectors", (p0, p1))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def projector(self, a: int) -> np.ndarray:
        return self.projectors[_outcome(a)]


@dataclass(frozen=True, eq=False)
class BinaryPovm:
    elements: tuple

    def __post_init__(self):
        if len(self.elements) != 2:
            raise ValueError("a binary POVM has exactly two elements")
        M0, M1 = (nk.as_matrix(M).copy() for M in self.elements)
        if M0.shape != M1.shape or M0.shape[0] != M0.shape[1]:
            raise ValueError("POVM elements must be square and of equal shape")
        d = M0.shape[0]
        for M in (M0, M1):
            if not nk.is_hermitian(M):
                raise ValueError("POVM element is not Hermitian")
            w = np.linalg.eigvalsh(M)
            if w[0] < -1e-10 or w[-1] > 1 + 1e-10:
                raise ValueError("POVM element eigenvalues outside [0, 1]")
        if nk.op_distance(M0 + M1, np.eye(d)) > 1e-10:
            raise ValueError("POVM elements do not sum to the identity")
        for M in (M0, M1):
            M.setflags(write=False)
        object.__setattr__(self, "elements", (M0, M1))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def projectivity_error(self) -> float:
        return max(nk.op_distance(M @ M, M) for M in self.elements)

    def is_projective(self, tol: float = 1e-6) -> bool:
        return self.projectivity_error() <= tol


@dataclass(frozen=True, eq=False)
class BinaryInstrument:
    """POVM plus outcome-dependent unitaries; Kraus operators ``U_a sqrt(M_a)``."""

    povm: BinaryPovm
    unitaries: tuple = None

    def __post_init__(self):
        d = self.povm.dim
        us = self.unitaries
        if us is None:
            us = (np.eye(d, dtype=complex), np.eye(d, dtype=complex))
        if len(us) != 2:
            raise ValueError("need one unitary per outcome")
        us = tuple(nk.as_matrix(U).copy() for U in us)
        for U in us:
            if U.shape != (d, d):
                raise ValueError("unitary has wrong dimension")
            if nk.op_distance(U @ U.conj().T, np.eye(d)) > 1e-10:
                raise ValueError("outcome map is not unitary")
            U.setflags(write=False)
        object.__setattr__(self, "unitaries", us)
        kraus = tuple(U @ nk.psd_sqrt(M) for U, M in zip(us, self.povm.elements))
        total = sum(K.conj().T @ K for K in kraus)
        if nk.op_distance(total, np.eye(d)) > 1e-9:
            raise ValueError("Kraus operators are not trace preserving")
        object.__setattr__(self, "_kraus", kraus)

    @property
    def dim(self) -> int:
        return self.povm.dim

    @property
    def kraus(self) -> tuple:
        return self._kraus

    @classmethod
    def projective(cls, obs: DichotomicObservable, unitaries=None) -> "BinaryInstrument":
        return cls(BinaryPovm(obs.projectors), unitaries)

    @classmethod
    def noisy(cls, obs: DichotomicObservable, weight: float) -> "BinaryInstrument":
        """``M_a = w Pi_a + (1 - w) Pi_(1-a)`` with identity unitaries."""
        if not 0.0 <= weight <= 1.0:
            raise ValueError("weight must lie in [0, 1]")
        p0, p1 = obs.projectors
        return cls(BinaryPovm((weight * p0 + (1 - weight) * p1, weight * p1 + (1 - weight) * p0)))


def _outcome(a: int) -> int:
    if a not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {a!r}")
    return int(a)


def bloch_angle(n: int, x: int) -> float:
    """Angle in the X-Z plane of the ``x``-th canonical observable."""
    if n < 3:
        raise ValueError(f"need n >= 3 inputs, got {n}")
    if not 1 <= x <= n:
        raise ValueError(f"input label {x} outside 1..{n}")
    return np.pi * (x - 1) / n


def xz_observable(theta: float) -> DichotomicObservable:
    return DichotomicObservable(np.cos(theta) * nk.PAULI_Z + np.sin(theta) * nk.PAULI_X)


def canonical_observable(n: int, x: int) -> DichotomicObservable:
    """Qubit observable ``cos(t) Z + sin(t) X`` with ``t = pi (x - 1) / n``."""
    return xz_observable(bloch_angle(n, x))


def canonical_observables(n: int) -> list:
    return [canonical_observable(n, x) for x in range(1, n + 1)]


def eigenstate(obs: DichotomicObservable, a: int) -> np.ndarray:
    """Unit eigenvector of ``obs`` for eigenvalue ``(-1)**a``.

    Only meaningful when the eigenspace is one-dimensional.  The phase is
    fixed so the first nonzero component is real positive.
    """
    a = _outcome(a)
    w, v = nk.hermitian_eig(obs.matrix)
    sign = 1.0 - 2.0 * a
    idx = np.flatnonzero(np.abs(w - sign) < 1e-8)
    if idx.size != 1:
        raise ValueError(f"eigenvalue {sign:+.0f} has multiplicity {idx.size}, expected 1")
    return nk.fix_phase(v[:, idx[0]])


def observable_from_instrument(inst: BinaryInstrument, tol: float = 1e-6) -> DichotomicObservable:
    if not inst.povm.is_projective(tol):
        raise ValueError("instrument POVM is not projective")
    M0, M1 = inst.povm.elements
    return DichotomicObservable(M0 - M1)


def maximally_mixed(dim: int) -> DensityState:
    if dim < 1:
        raise ValueError("dimension must be positive")
    return DensityState(np.eye(dim, dtype=complex) / dim)


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_full_rank_state(dim: int, seed: int) -> DensityState:
    """Seeded mixture ``(1 - eps) G G^dag / tr + eps I / d`` with ``eps = 1e-2``."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    G = _ginibre(dim, nk.rng_stream("quantum.full_rank", seed))
    W = G @ G.conj().T
    rho = (1 - FULL_RANK_MIXING) * W / np.trace(W).real + FULL_RANK_MIXING * np.eye(dim) / dim
    return DensityState(rho)


def random_pure_state(dim: int, seed: int) -> DensityState:
    if dim < 1:
        raise ValueError("dimension must be positive")
    rng = nk.rng_stream("quantum.pure", seed)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityState.from_vector(psi)


def random_observable(dim: int, rng: np.random.Generator, rank=None) -> DichotomicObservable:
    """Random involution ``V diag(+-1) V^dag`` with Haar ``V``.

    ``rank`` is the dimension of the +1 eigenspace; drawn uniformly if omitted.
    """
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    signs = np.array([1.0] * rank + [-1.0] * (dim - rank))
    V = nk.haar_unitary(dim, rng)
    return DichotomicObservable((V * signs) @ V.conj().T)
