"""Certified randomness from sequences of certified qubit measurements.

Once the device measurements are certified, measuring the alternating
sequence ``(i, i + n/2, i, ...)`` of length ``N`` leaves an adversary holding
a purification of the device state with guessing probability at most
``2**-(N-1)``.  :func:`eve_oracle` evaluates the adversary's optimum for a
concrete joint state by brute force, independently of the closed form.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import numkit as nk
from .lgcert import alternating_inputs
from .quantum import DensityState, canonical_observable, eigenstate

ORACLE_MAX_DIM_E = 8
ORACLE_MAX_N = 8


@dataclass(frozen=True)
class RandomnessReport:
    p_guess: float
    min_entropy_bits: float
    N: int
    method: str  # "closed_form" | "oracle"


def min_entropy(p_guess: float) -> float:
    if not 0.0 < p_guess <= 1.0:
        raise ValueError(f"guessing probability must lie in (0, 1], got {p_guess!r}")
    return 0.0 - math.log2(p_guess)  # avoid -0.0 at p_guess = 1


def overlap_factor(n: int, inputs, outcomes) -> float:
    """``prod_l |<e_{x_l, a_l} | e_{x_{l+1}, a_{l+1}}>|**2`` over canonical eigenstates."""
    inputs, outcomes = tuple(inputs), tuple(outcomes)
    if len(inputs) != len(outcomes):
        raise ValueError("inputs and outcomes differ in length")
    vecs = [eigenstate(canonical_observable(n, x), a) for x, a in zip(inputs, outcomes)]
    f = 1.0
    for u, v in zip(vecs, vecs[1:]):
        f *= abs(np.vdot(u, v)) ** 2
    return f


def guessing_probability_certified(n: int, N: int) -> RandomnessReport:
    """Closed-form ``p_guess = 2**-(N-1)`` for even ``n``.

    Odd ``n`` is rejected; no rate is derived for it.
    """
    if n < 4 or n % 2:
        raise ValueError(f"closed form requires even n >= 4, got {n}")
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    p = 2.0 ** -(N - 1)
    return RandomnessReport(p, min_entropy(p), N, "closed_form")


@dataclass(frozen=True, eq=False)
class AdversaryScenario:
    """Pure joint state of device (A) and adversary (E) plus the input sequence.

    ``psi`` is a vector indexed ``a * dim_E + e``; the device space factors as
    qubit (x) auxiliary, so ``dim_A`` must be even.
    """

    psi: np.ndarray
    dim_A: int
    dim_E: int
    n: int
    inputs: tuple

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex).ravel()
        if psi.size != self.dim_A * self.dim_E:
            raise ValueError("psi has the wrong length for dim_A * dim_E")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise ValueError("psi is not normalised")
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "inputs", tuple(int(x) for x in self.inputs))

    @property
    def N(self) -> int:
        return len(self.inputs)

    def reduced_state(self) -> DensityState:
        M = self.psi.reshape(self.dim_A, self.dim_E)
        return DensityState(M @ M.conj().T)

    @classmethod
    def alternating(cls, psi, dim_A: int, dim_E: int, n: int, N: int, i: int = 2) -> "AdversaryScenario":
        return cls(psi, dim_A, dim_E, n, alternating_inputs(n, i, N))


def purification(state: DensityState, dim_E: int, seed=None) -> np.ndarray:
    """A purification of ``state`` on ``dim_A * dim_E``.

    The Schmidt vectors on E are the first basis vectors, or the columns of a
    seeded Haar isometry when ``seed`` is given.
    """
    w, v = np.linalg.eigh(state.matrix)
    keep = w > 1e-14
    if keep.sum() > dim_E:
        raise ValueError(f"rank {keep.sum()} exceeds environment dimension {dim_E}")
    w, v = np.clip(w[keep], 0, None), v[:, keep]
    if seed is None:
        E = np.eye(dim_E, dtype=complex)[:, : w.size]
    else:
        E = nk.haar_unitary(dim_E, nk.rng_stream("randcert.purify", seed))[:, : w.size]
    psi = (v * np.sqrt(w)) @ E.T  # (dim_A, dim_E)
    psi = psi.ravel()
    return psi / np.linalg.norm(psi)


def helstrom_success(sigma0, sigma1) -> float:
    """Optimal ``Tr(sigma0 W0) + Tr(sigma1 W1)`` over two-outcome POVMs.

    Priors are folded into the unnormalised ``sigma``s.
    """
    s0, s1 = nk.as_matrix(sigma0), nk.as_matrix(sigma1)
    return 0.5 * (np.trace(s0).real + np.trace(s1).real + nk.trace_norm(s0 - s1))


def eve_conditional_states(scen: AdversaryScenario) -> dict:
    """Unnormalised adversary states for every outcome string.

    Uses the certified projectors ``|e_{x,a}><e_{x,a}| (x) 1_aux`` directly.
    """
    m = scen.dim_A // 2
    aux = np.eye(m)
    proj = {}
    for x in set(scen.inputs):
        obs = canonical_observable(scen.n, x)
        for a in (0, 1):
            e = eigenstate(obs, a)
            proj[x, a] = np.kron(np.outer(e, e.conj()), aux)
    Psi = scen.psi.reshape(scen.dim_A, scen.dim_E)
    out = {}
    for outcomes in itertools.product((0, 1), repeat=scen.N):
        K = np.eye(scen.dim_A, dtype=complex)
        for x, a in zip(scen.inputs, outcomes):
            K = proj[x, a] @ K
        phi = K @ Psi
        # Tr_A |phi><phi| on E
        out[outcomes] = phi.T @ phi.conj()
    return out


def eve_oracle(scen: AdversaryScenario) -> RandomnessReport:
    """Adversary's optimal probability of guessing the whole outcome string.

    Every conditional state is a scalar multiple of the ``a_1``-marginal state
    ``tau_{a_1}`` (later projections contribute only overlaps).  Eve's best
    strategy therefore guesses ``a_1`` by Helstrom discrimination and the tail
    with the largest weight.
    """
    if scen.dim_A % 2:
        raise ValueError("dim_A must be even")
    if scen.dim_E > ORACLE_MAX_DIM_E or scen.N > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to dim_E <= {ORACLE_MAX_DIM_E}, N <= {ORACLE_MAX_N}")
    sigmas = eve_conditional_states(scen)
    weighted = []
    for a1 in (0, 1):
        group = {a: s for a, s in sigmas.items() if a[0] == a1}
        tau = sum(group.values())
        t = np.trace(tau).real
        if t <= 1e-15:
            weighted.append(np.zeros_like(tau))
            continue
        best = 0.0
        for s in group.values():
            c = np.trace(s).real / t
            if nk.op_distance(s, c * tau) > 1e-10 * max(1.0, nk.frobenius(tau)):
                raise RuntimeError("conditional states are not proportional within an a_1 branch")
            best = max(best, c)
        weighted.append(best * tau)
    p = float(min(1.0, helstrom_success(*weighted)))
    return RandomnessReport(p, min_entropy(p), scen.N, "oracle")
