import numpy as np
import pytest

from lgtoolkit import numkit as nk
from lgtoolkit.quantum import (
    BinaryInstrument,
    BinaryPovm,
    DensityState,
    DichotomicObservable,
    canonical_observable,
    eigenstate,
    maximally_mixed,
    observable_from_instrument,
    random_full_rank_state,
    random_pure_state,
)

S = 1 / np.sqrt(2)


def test_canonical_first_is_sigma_z():
    assert np.allclose(canonical_observable(4, 1).matrix, nk.PAULI_Z)


def test_canonical_n4_x2():
    assert np.allclose(canonical_observable(4, 2).matrix, S * np.array([[1, 1], [1, -1]]))


def test_canonical_n4_x4():
    c = np.cos(np.pi / 4)
    assert np.allclose(canonical_observable(4, 4).matrix, [[-c, c], [c, c]])


@pytest.mark.parametrize("n,x", [(2, 1), (4, 0), (4, 5)])
def test_canonical_bad_labels(n, x):
    with pytest.raises(ValueError):
        canonical_observable(n, x)


def test_canonical_involution_and_projectors():
    for n in range(3, 17):
        for x in range(1, n + 1):
            A = canonical_observable(n, x)
            assert nk.op_distance(A.matrix @ A.matrix, np.eye(2)) < 1e-12
            p0, p1 = A.projectors
            assert nk.op_distance(p0 - p1, A.matrix) < 1e-12
            assert nk.op_distance(p0 @ p0, p0) < 1e-9
            assert nk.op_distance(p0 + p1, np.eye(2)) < 1e-10


def test_anticommutator_state_independence():
    states = [maximally_mixed(2)] + [random_pure_state(2, s) for s in range(5)]
    states += [random_full_rank_state(2, s) for s in range(5)]
    for n in (3, 4, 7, 10):
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                ac = nk.anticommutator(canonical_observable(n, x).matrix, canonical_observable(n, y).matrix)
                for rho in states:
                    assert abs(0.5 * rho.expect(ac) - np.cos(np.pi * (x - y) / n)) < 1e-10


def test_quarter_turn_pairs_anticommute():
    for n in range(4, 17, 2):
        for x in range(1, n // 2 + 1):
            A, B = canonical_observable(n, x), canonical_observable(n, x + n // 2)
            assert nk.frobenius(nk.anticommutator(A.matrix, B.matrix)) < 1e-12


def test_eigenstates():
    assert np.allclose(eigenstate(DichotomicObservable(nk.PAULI_Z), 0), [1, 0])
    assert np.allclose(eigenstate(DichotomicObservable(nk.PAULI_Z), 1), [0, 1])
    e = eigenstate(canonical_observable(4, 2), 0)
    assert np.allclose(e, [np.cos(np.pi / 8), np.sin(np.pi / 8)])
    f = eigenstate(canonical_observable(4, 4), 0)
    assert abs(abs(np.vdot(e, f)) ** 2 - 0.5) < 1e-12


def test_eigenstate_sign_convention():
    for n in (3, 5, 8):
        for x in range(1, n + 1):
            A = canonical_observable(n, x)
            for a in (0, 1):
                v = eigenstate(A, a)
                assert np.allclose(A.matrix @ v, (-1) ** a * v)
                first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
                assert abs(first.imag) < 1e-15 and first.real > 0


def test_eigenstate_degenerate_rejected():
    with pytest.raises(ValueError):
        eigenstate(DichotomicObservable(np.eye(2)), 0)


def test_observable_from_instrument_roundtrip():
    Z = DichotomicObservable(nk.PAULI_Z)
    assert np.allclose(observable_from_instrument(BinaryInstrument.projective(Z)).matrix, nk.PAULI_Z)
    A = canonical_observable(4, 2)
    assert nk.op_distance(observable_from_instrument(BinaryInstrument.projective(A)).matrix, A.matrix) < 1e-12


def test_observable_from_noisy_instrument_fails():
    noisy = BinaryInstrument.noisy(DichotomicObservable(nk.PAULI_Z), 0.9)
    with pytest.raises(ValueError):
        observable_from_instrument(noisy)


def test_states():
    assert np.allclose(maximally_mixed(2).matrix, np.diag([0.5, 0.5]))
    for s in range(5):
        rho = random_full_rank_state(2, s)
        assert abs(np.trace(rho.matrix) - 1) < 1e-12
        assert rho.min_eigenvalue > 1e-3 and rho.full_rank()
        pure = random_pure_state(4, s)
        assert abs(pure.purity() - 1) < 1e-10
        assert not pure.full_rank()
    assert np.array_equal(random_full_rank_state(3, 7).matrix, random_full_rank_state(3, 7).matrix)
    assert not np.array_equal(random_full_rank_state(3, 7).matrix, random_full_rank_state(3, 8).matrix)
    with pytest.raises(ValueError):
        maximally_mixed(0)


def test_invalid_objects_rejected():
    with pytest.raises(ValueError):
        DensityState(np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        DensityState(np.diag([1.2, -0.2]))
    with pytest.raises(ValueError):
        DichotomicObservable(np.diag([1.0, 0.5]))
    with pytest.raises(ValueError):
        BinaryPovm((np.diag([1.0, 0.0]), np.diag([0.5, 1.0])))
    with pytest.raises(ValueError):
        BinaryInstrument(BinaryPovm((np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))), (np.eye(2), 2 * np.eye(2)))


def test_instrument_kraus_complete(rng):
    for _ in range(20):
        U = nk.haar_unitary(3, rng)
        w = rng.uniform(0, 1, 3)
        M0 = (U * w) @ U.conj().T
        inst = BinaryInstrument(BinaryPovm((M0, np.eye(3) - M0)), (nk.haar_unitary(3, rng), nk.haar_unitary(3, rng)))
        total = sum(K.conj().T @ K for K in inst.kraus)
        assert nk.op_distance(total, np.eye(3)) < 1e-9
