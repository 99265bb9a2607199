import itertools

import numpy as np
import pytest

from lgtoolkit import numkit as nk
from lgtoolkit.quantum import BinaryInstrument, BinaryPovm, random_observable

ACCEPTANCE_LINES = []


def record_criterion(label, passed, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_observable_set(n, dim, rng):
    return [random_observable(dim, rng) for _ in range(n)]


def random_hermitian(dim, rng):
    G = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return G + G.conj().T


def nested_trace_distribution(rho, observables, inputs):
    """Reference: p(a|x) = Tr(P_1 .. P_{N-1} P_N P_{N-1} .. P_1 rho), one string at a time."""
    out = []
    for outcomes in itertools.product((0, 1), repeat=len(inputs)):
        Ps = [observables[x - 1].projector(a) for x, a in zip(inputs, outcomes)]
        chain = np.eye(rho.shape[0], dtype=complex)
        for P in Ps:
            chain = chain @ P
        for P in reversed(Ps[:-1]):
            chain = chain @ P
        out.append(np.trace(chain @ rho).real)
    return np.array(out)


def brute_force_classical_bound(n):
    best = -np.inf
    for s in itertools.product((1, -1), repeat=n):
        v = sum(s[x] * s[x + 1] for x in range(n - 1)) - s[n - 1] * s[0]
        best = max(best, v)
    return best


def random_instrument(kind, d, rng):
    V = nk.haar_unitary(d, rng)
    r = int(rng.integers(0, d + 1))
    proj = np.diag([1.0] * r + [0.0] * (d - r))
    if kind == "povm":
        M0 = (V * rng.uniform(0, 1, d)) @ V.conj().T
        us = (nk.haar_unitary(d, rng), nk.haar_unitary(d, rng))
    elif kind == "near":
        eps = 10 ** rng.uniform(-4, -0.5)
        M0 = V @ np.diag([1 - eps] * r + [eps] * (d - r)) @ V.conj().T
        us = None
    elif kind == "proj_identity":
        M0 = V @ proj @ V.conj().T
        us = None
    elif kind == "proj_block":
        # unitaries preserving the two eigenspaces keep the outcome stable
        def block():
            B = np.zeros((d, d), dtype=complex)
            B[:r, :r] = nk.haar_unitary(r, rng) if r else B[:r, :r]
            B[r:, r:] = nk.haar_unitary(d - r, rng) if d - r else B[r:, r:]
            return V @ B @ V.conj().T

        M0 = V @ proj @ V.conj().T
        us = (block(), block())
    else:  # projective with generic unitaries
        M0 = V @ proj @ V.conj().T
        us = (nk.haar_unitary(d, rng), nk.haar_unitary(d, rng))
    M0 = 0.5 * (M0 + M0.conj().T)
    return BinaryInstrument(BinaryPovm((M0, np.eye(d) - M0)), us)
