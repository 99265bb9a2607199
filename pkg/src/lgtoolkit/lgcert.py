"""Leggett-Garg functionals, their bounds, the sum-of-squares certificate and
the constructive self-test of measurements at maximal violation.

Observables are passed as a list where ``observables[x - 1]`` belongs to input
label ``x``.  The LG functional used throughout is

    L = sum_{x=1}^{n-1} C_{x,x+1} - C_{n,1}

with classical (memoryless) bound ``n - 2`` and quantum bound ``n cos(pi/n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numkit as nk
from .quantum import (
    DensityState,
    DichotomicObservable,
    canonical_observable,
    canonical_observables,
    maximally_mixed,
    xz_observable,
    bloch_angle,
)
from .seqsim import simulate_projective

MAXIMIZER_TOL = 1e-7
# roundoff must not count as beating the memoryless bound
CLASSICAL_MARGIN = 1e-9
ENUMERATION_MAX_N = 24


class CertificationError(ValueError):
    """Observables fail a precondition of the self-test."""


def classical_bound(n: int) -> int:
    return n - 2


def quantum_bound(n: int) -> float:
    return n * math.cos(math.pi / n)


@dataclass(frozen=True)
class LgValue:
    n: int
    value: float
    classical_bound: float
    quantum_bound: float

    @property
    def quantum_gap(self) -> float:
        return self.quantum_bound - self.value

    @property
    def violates_classical(self) -> bool:
        return self.value > self.classical_bound + CLASSICAL_MARGIN


def _check_observables(observables, n_min: int = 1) -> list:
    obs = list(observables)
    if len(obs) < n_min:
        raise ValueError(f"need at least {n_min} observables, got {len(obs)}")
    for A in obs:
        if not isinstance(A, DichotomicObservable):
            raise TypeError("projective observables (DichotomicObservable) required")
    d = obs[0].dim
    if any(A.dim != d for A in obs):
        raise ValueError("observables have inconsistent dimensions")
    return obs


def two_time_correlation(state: DensityState, observables, x: int, y: int) -> float:
    """``C_{x,y}`` from the sequential statistics of measuring ``x`` then ``y``.

    For projective measurements this equals ``1/2 <{A_x, A_y}>``; the two routes
    are compared and a mismatch raises.
    """
    obs = _check_observables(observables)
    c = simulate_projective(state, obs, (x, y)).correlator()
    ref = 0.5 * state.expect(nk.anticommutator(obs[x - 1].matrix, obs[y - 1].matrix))
    if abs(c - ref) > 1e-9:
        raise RuntimeError(f"sequential correlator {c} disagrees with anticommutator form {ref}")
    return c


def multi_time_correlation(state: DensityState, observables, inputs) -> float:
    obs = _check_observables(observables)
    return simulate_projective(state, obs, inputs).correlator()


def lg_value(state: DensityState, observables) -> LgValue:
    obs = _check_observables(observables, n_min=3)
    n = len(obs)
    total = sum(two_time_correlation(state, obs, x, x + 1) for x in range(1, n))
    total -= two_time_correlation(state, obs, n, 1)
    return LgValue(n, float(total), classical_bound(n), quantum_bound(n))


def lg_operator(observables) -> np.ndarray:
    obs = _check_observables(observables, n_min=3)
    n = len(obs)
    L = sum(nk.anticommutator(obs[x].matrix, obs[x + 1].matrix) for x in range(n - 1))
    L = L - nk.anticommutator(obs[n - 1].matrix, obs[0].matrix)
    return 0.5 * L


def classical_bound_enumerated(n: int) -> int:
    """Maximum of the LG expression over all deterministic +-1 assignments."""
    if not 3 <= n <= ENUMERATION_MAX_N:
        raise ValueError(f"n must lie in 3..{ENUMERATION_MAX_N}, got {n}")
    best = None
    shifts = np.arange(n, dtype=np.int64)
    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        s = 1 - 2 * ((idx[:, None] >> shifts) & 1)
        vals = (s[:, :-1] * s[:, 1:]).sum(axis=1) - s[:, -1] * s[:, 0]
        m = int(vals.max())
        best = m if best is None else max(best, m)
    return best


def alternating_inputs(n: int, i: int, N: int) -> tuple:
    """``(i, i + n/2, i, i + n/2, ...)`` of length ``N``."""
    if n % 2:
        raise ValueError(f"alternating sequences need even n, got {n}")
    if not 2 <= i <= n // 2:
        raise ValueError(f"i must lie in 2..{n // 2}, got {i}")
    if N < 1:
        raise ValueError("sequence length must be positive")
    return tuple(i if k % 2 == 0 else i + n // 2 for k in range(N))


def randomness_functional(state: DensityState, observables, i: int, N: int) -> float:
    """``L - |C_{i, i+n/2, i, ...}|`` with an alternating sequence of length ``N``.

    ``N >= 2`` is required: for a single measurement the correlator is just
    ``<A_i>``, which is state dependent.
    """
    obs = _check_observables(observables, n_min=3)
    if N < 2:
        raise ValueError("alternating sequence needs N >= 2")
    xs = alternating_inputs(len(obs), i, N)
    corr = multi_time_correlation(state, obs, xs)
    return lg_value(state, obs).value - abs(corr)


def sos_coefficients(n: int) -> list:
    """``(alpha_i, beta_i)`` for ``i = 1..n-2``."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    s = math.sin
    return [
        (s(math.pi * i / n) / s(math.pi * (i + 1) / n), s(math.pi / n) / s(math.pi * (i + 1) / n))
        for i in range(1, n - 1)
    ]


@dataclass(frozen=True, eq=False)
class SosCertificate:
    n: int
    coefficients: list
    operators: list
    identity_residual: float
    expectation_residuals: list

    @property
    def max_expectation_residual(self) -> float:
        return max(self.expectation_residuals)


def sos_certificate(observables, state: DensityState) -> SosCertificate:
    """Build ``P_i = A_i - alpha_i A_{i+1} + beta_i A_n`` and check the SOS identity.

    ``identity_residual`` measures how far ``sum_i P_i^dag P_i / (2 alpha_i)``
    is from ``beta_Q I - L_hat``; it vanishes for any involutions.  The
    expectation residuals ``Tr(P_i^dag P_i rho)`` all vanish only at maximal
    violation.
    """
    obs = _check_observables(observables, n_min=3)
    n = len(obs)
    d = obs[0].dim
    coeffs = sos_coefficients(n)
    An = obs[n - 1].matrix
    ops, lhs = [], np.zeros((d, d), dtype=complex)
    for i, (a, b) in enumerate(coeffs, start=1):
        P = obs[i - 1].matrix - a * obs[i].matrix + b * An
        ops.append(P)
        lhs = lhs + (P.conj().T @ P) / (2 * a)
    rhs = quantum_bound(n) * np.eye(d) - lg_operator(obs)
    resid = nk.op_distance(lhs, rhs)
    expect = [state.expect(P.conj().T @ P) for P in ops]
    return SosCertificate(n, coeffs, ops, resid, expect)


def trig_identity_check(n: int) -> float:
    """``|sum_i (1/alpha_i + alpha_i + beta_i^2/alpha_i) - 2 n cos(pi/n)|``."""
    total = math.fsum(1 / a + a + b * b / a for a, b in sos_coefficients(n))
    return abs(total - 2 * n * math.cos(math.pi / n))


@dataclass(frozen=True, eq=False)
class SelfTestResult:
    unitary: np.ndarray
    max_deviation: float
    traceless_check: float
    anticommutator_check: float
    deviations: tuple = ()

    @property
    def aux_dim(self) -> int:
        return self.unitary.shape[0] // 2


def _plus_eigenbasis(Z: np.ndarray, m: int) -> np.ndarray:
    """Orthonormal basis of the +1 eigenspace of ``Z``.

    Ordered Gram-Schmidt over the projections of the standard basis vectors,
    so the choice inside a degenerate eigenspace is deterministic.
    """
    d = Z.shape[0]
    w, v = np.linalg.eigh(0.5 * (Z + Z.conj().T))
    plus = v[:, w > 0]
    if plus.shape[1] != m:
        raise CertificationError(f"+1 eigenspace has dimension {plus.shape[1]}, expected {m}")
    proj = plus @ plus.conj().T
    basis = []
    for j in range(d):
        u = proj[:, j].copy()
        for _ in range(2):
            for b in basis:
                u = u - b * np.vdot(b, u)
        norm = np.linalg.norm(u)
        if norm > 1e-6:
            u = proj @ (u / norm)
            basis.append(u / np.linalg.norm(u))
        if len(basis) == m:
            break
    if len(basis) != m:
        raise CertificationError("could not span the +1 eigenspace")
    return np.column_stack(basis)


def extract_certification_unitary(observables, tol: float = MAXIMIZER_TOL, state=None) -> SelfTestResult:
    """Recover the unitary taking maximally violating observables to canonical form.

    ``state`` (full rank, defaults to the maximally mixed state) is used to
    confirm that every ``Tr(P_i^dag P_i rho)`` is below ``tol``.  From
    ``Z = (A_2 - A_n) / (2 cos(pi/n))`` and ``X = (A_2 + A_n) / (2 sin(pi/n))``
    the unitary sends ``Z -> sigma_z (x) 1`` and ``X -> sigma_x (x) 1``.
    """
    obs = _check_observables(observables, n_min=3)
    n, d = len(obs), obs[0].dim
    if d % 2:
        raise CertificationError(f"odd dimension {d} cannot host a qubit factor")
    if state is None:
        state = maximally_mixed(d)
    if not state.full_rank():
        raise CertificationError("certification state must be full rank")
    cert = sos_certificate(obs, state)
    if cert.max_expectation_residual >= tol:
        raise CertificationError(
            f"SOS residual {cert.max_expectation_residual:.3e} >= {tol:.1e}: not a maximal violation"
        )
    A2, An = obs[1].matrix, obs[n - 1].matrix
    Z = (A2 - An) / (2 * math.cos(math.pi / n))
    X = (A2 + An) / (2 * math.sin(math.pi / n))
    eye = np.eye(d)
    squares = max(nk.op_distance(Z @ Z, eye), nk.op_distance(X @ X, eye))
    anti = nk.frobenius(nk.anticommutator(Z, X))
    if squares > tol:
        raise CertificationError(f"Z^2 or X^2 deviates from identity by {squares:.3e}")
    if anti > tol:
        raise CertificationError(f"{{Z, X}} has norm {anti:.3e}")

    m = d // 2
    plus = _plus_eigenbasis(Z, m)
    # columns ordered as qubit (x) aux: |0>|k> -> u_k, |1>|k> -> X u_k
    V = np.column_stack([plus, X @ plus])
    U = V.conj().T
    aux_eye = np.eye(m)
    devs = tuple(
        nk.op_distance(U @ A.matrix @ V, np.kron(canonical_observable(n, x).matrix, aux_eye))
        for x, A in enumerate(obs, start=1)
    )
    traceless = max(abs(np.trace(A.matrix)) for A in obs)
    return SelfTestResult(U, max(devs), float(traceless), anti, devs)


def planted_observables(n: int, aux_dim: int, seed: int, base=None):
    """Qubit observables tensored with ``1_aux`` and hidden by a Haar unitary.

    ``base`` defaults to the canonical family.  Returns ``(observables, W)``
    with ``A_x = W^dag (base_x (x) 1) W``.
    """
    if aux_dim < 1:
        raise ValueError("aux_dim must be positive")
    base = canonical_observables(n) if base is None else list(base)
    if len(base) != n:
        raise ValueError(f"expected {n} base observables, got {len(base)}")
    W = nk.haar_unitary(2 * aux_dim, nk.rng_stream("lgcert.plant", seed))
    eye = np.eye(aux_dim)
    obs = [DichotomicObservable(W.conj().T @ np.kron(A.matrix, eye) @ W) for A in base]
    return obs, W


def perturbed_observables(n: int, angle: float) -> list:
    """Canonical qubit observables with ``A_2`` rotated by ``angle`` in the X-Z plane."""
    obs = canonical_observables(n)
    obs[1] = xz_observable(bloch_angle(n, 2) + angle)
    return obs
