"""Sequential measurement statistics and the Zeno / NSIT / projectivity checks.

A run measures one system repeatedly with inputs ``x_1, ..., x_N`` and records
binary outcomes.  The full table over all ``2**N`` outcome strings is kept
densely; strings are ordered lexicographically with ``a_1`` most significant.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .quantum import BinaryInstrument, BinaryPovm, DensityState, DichotomicObservable

MAX_SEQUENCE_LENGTH = 20
ZENO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SequenceDistribution:
    inputs: tuple
    table: np.ndarray  # shape (2**N,)
    n_inputs: int = 0

    def __post_init__(self):
        p = np.asarray(self.table, dtype=float)
        N = len(self.inputs)
        if p.shape != (2**N,):
            raise ValueError(f"expected {2**N} probabilities, got shape {p.shape}")
        if p.min() < -1e-12 or p.max() > 1 + 1e-12:
            raise ValueError("probability outside [0, 1]")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {p.sum()!r}")
        p.setflags(write=False)
        object.__setattr__(self, "inputs", tuple(int(x) for x in self.inputs))
        object.__setattr__(self, "table", p)

    @property
    def length(self) -> int:
        return len(self.inputs)

    def outcome_strings(self):
        return itertools.product((0, 1), repeat=self.length)

    @property
    def probabilities(self) -> dict:
        return {a: float(p) for a, p in zip(self.outcome_strings(), self.table)}

    def __getitem__(self, outcomes) -> float:
        outcomes = tuple(outcomes)
        if len(outcomes) != self.length or any(a not in (0, 1) for a in outcomes):
            raise KeyError(outcomes)
        idx = 0
        for a in outcomes:
            idx = 2 * idx + a
        return float(self.table[idx])

    def _bits(self) -> np.ndarray:
        N = self.length
        idx = np.arange(2**N)
        # column k holds a_{k+1}
        return (idx[:, None] >> np.arange(N - 1, -1, -1)) & 1

    def marginal(self, k: int) -> tuple:
        """Distribution of the outcome at 0-based position ``k``."""
        bits = self._bits()[:, k]
        p1 = float(self.table[bits == 1].sum())
        return (float(self.table[bits == 0].sum()), p1)

    def correlator(self) -> float:
        """``sum_a (-1)**(a_1 + ... + a_N) p(a|x)``."""
        signs = 1 - 2 * (self._bits().sum(axis=1) % 2)
        return float(signs @ self.table)


def _check_inputs(dim: int, devices, inputs) -> tuple:
    inputs = tuple(int(x) for x in inputs)
    if not inputs:
        raise ValueError("empty input sequence")
    if len(inputs) > MAX_SEQUENCE_LENGTH:
        raise ValueError(f"sequence length {len(inputs)} exceeds cap {MAX_SEQUENCE_LENGTH}")
    for x in inputs:
        if not 1 <= x <= len(devices):
            raise ValueError(f"input label {x} outside 1..{len(devices)}")
    for dev in devices:
        if dev.dim != dim:
            raise ValueError(f"device dimension {dev.dim} does not match state dimension {dim}")
    return inputs


def _run_chain(rho: np.ndarray, step_ops) -> np.ndarray:
    """Branch the unnormalised state over every outcome string.

    ``step_ops`` yields, per step, the pair of Kraus operators for outcomes 0, 1.
    """
    stack = rho[None, :, :]
    for K0, K1 in step_ops:
        branches = [K @ stack @ K.conj().T for K in (K0, K1)]
        stack = np.stack(branches, axis=1).reshape(-1, *rho.shape)
    return np.trace(stack, axis1=1, axis2=2).real


def simulate_projective(state: DensityState, observables, inputs) -> SequenceDistribution:
    """Outcome statistics of projective measurements under the Lueders update.

    ``observables[x - 1]`` is the observable for input label ``x``.
    """
    inputs = _check_inputs(state.dim, observables, inputs)
    ops = [observables[x - 1].projectors for x in inputs]
    p = _run_chain(state.matrix, ops)
    return SequenceDistribution(inputs, np.clip(p, 0.0, None), len(observables))


def simulate_instrument(state: DensityState, instruments, inputs) -> SequenceDistribution:
    """Outcome statistics for general instruments, ``rho -> K_a rho K_a^dag``."""
    inputs = _check_inputs(state.dim, instruments, inputs)
    ops = [instruments[x - 1].kraus for x in inputs]
    p = _run_chain(state.matrix, ops)
    return SequenceDistribution(inputs, np.clip(p, 0.0, None), len(instruments))


@dataclass(frozen=True)
class ZenoReport:
    max_violation: float
    passes: bool
    state_full_rank: bool


def check_zeno(state: DensityState, instrument: BinaryInstrument, tol: float = ZENO_TOL) -> ZenoReport:
    """Repeat the same measurement twice and check the outcome never changes.

    The violation is the largest of ``p(a, b)`` for ``a != b`` and
    ``|p(a, a) - p(a)|``.  A rank-deficient state only raises a warning: the
    condition is still evaluable, but it no longer forces projectivity.
    """
    full_rank = state.full_rank()
    if not full_rank:
        warnings.warn("Zeno check on a rank-deficient state does not imply projectivity", stacklevel=2)
    two = simulate_instrument(state, [instrument], (1, 1))
    single = [state.expect(M) for M in instrument.povm.elements]
    off = max(two[0, 1], two[1, 0])
    diag = max(abs(two[a, a] - single[a]) for a in (0, 1))
    v = float(max(off, diag))
    return ZenoReport(v, v <= tol, full_rank)


def is_projective(povm: BinaryPovm, tol: float = 1e-6) -> bool:
    """True iff ``||M_a^2 - M_a||_F <= tol`` for both elements."""
    return povm.is_projective(tol)


def single_shot_marginals(state: DensityState, devices) -> dict:
    """``{x: (p(0|x), p(1|x))}`` for observables or instruments."""
    out = {}
    for x, dev in enumerate(devices, start=1):
        elems = dev.projectors if isinstance(dev, DichotomicObservable) else dev.povm.elements
        out[x] = tuple(state.expect(M) for M in elems)
    return out


@dataclass(frozen=True)
class NsitReport:
    max_deviation: float
    per_position: tuple


def check_nsit(dist: SequenceDistribution, marginals: dict) -> NsitReport:
    """Compare each position's marginal against the single-shot distribution.

    This is a diagnostic only: sequential quantum measurements generally do
    signal in time.
    """
    devs = []
    for k, x in enumerate(dist.inputs):
        if x not in marginals:
            raise ValueError(f"no single-shot marginal for input {x}")
        ref = marginals[x]
        if len(ref) != 2:
            raise ValueError(f"marginal for input {x} must have two entries")
        got = dist.marginal(k)
        devs.append(max(abs(got[a] - ref[a]) for a in (0, 1)))
    return NsitReport(float(max(devs)), tuple(float(d) for d in devs))
