import math

import numpy as np
import pytest

from lgtoolkit import numkit as nk
from lgtoolkit.lgcert import (
    CertificationError,
    LgValue,
    classical_bound_enumerated,
    extract_certification_unitary,
    lg_value,
    multi_time_correlation,
    perturbed_observables,
    planted_observables,
    quantum_bound,
    randomness_functional,
    sos_certificate,
    sos_coefficients,
    trig_identity_check,
    two_time_correlation,
)
from lgtoolkit.quantum import (
    DensityState,
    DichotomicObservable,
    canonical_observable,
    canonical_observables,
    maximally_mixed,
    random_full_rank_state,
    random_pure_state,
)

from conftest import brute_force_classical_bound, random_observable_set

KET0 = DensityState(np.diag([1.0, 0.0]))
Z = DichotomicObservable(nk.PAULI_Z)


def test_two_time_correlation_examples():
    obs = canonical_observables(4)
    assert two_time_correlation(maximally_mixed(2), obs, 1, 2) == pytest.approx(math.cos(math.pi / 4), abs=1e-12)
    for s in range(10):
        rho = random_pure_state(2, s)
        assert two_time_correlation(rho, obs, 3, 3) == pytest.approx(1.0, abs=1e-12)
        assert abs(two_time_correlation(rho, obs, 2, 4)) < 1e-10


def test_correlation_requires_projective_observables():
    with pytest.raises(TypeError):
        two_time_correlation(maximally_mixed(2), [np.eye(2)], 1, 1)


def test_multi_time_correlation_examples():
    obs = canonical_observables(4)
    rho = random_full_rank_state(2, 11)
    assert multi_time_correlation(rho, obs, (3,)) == pytest.approx(rho.expect(obs[2].matrix), abs=1e-14)
    assert abs(multi_time_correlation(rho, obs, (2, 4, 2, 4))) < 1e-10
    assert multi_time_correlation(KET0, [Z], (1, 1, 1)) == pytest.approx(1.0)


def test_lg_value_canonical_n4():
    v = lg_value(maximally_mixed(2), canonical_observables(4))
    assert isinstance(v, LgValue)
    assert v.value == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert v.classical_bound == 2
    assert abs(v.quantum_bound - 4 * math.cos(math.pi / 4)) < 1e-12
    for s in range(20):
        assert abs(lg_value(random_full_rank_state(2, s), canonical_observables(4)).value - 2 * math.sqrt(2)) < 1e-10


def test_lg_value_all_equal_is_classical():
    for n in (3, 4, 7):
        v = lg_value(random_full_rank_state(2, n), [Z] * n)
        assert v.value == pytest.approx(n - 2, abs=1e-12)
        assert not v.violates_classical


def test_lg_value_needs_three_inputs():
    with pytest.raises(ValueError):
        lg_value(maximally_mixed(2), canonical_observables(3)[:2])


def test_lg_value_bounded_by_quantum_bound(rng):
    for k in range(200):
        d = (2, 4)[k % 2]
        n = int(rng.integers(3, 8))
        obs = random_observable_set(n, d, rng)
        v = lg_value(random_full_rank_state(d, k), obs)
        assert v.value <= quantum_bound(n) + 1e-8


def test_classical_bound_matches_brute_force():
    for n in range(3, 13):
        assert classical_bound_enumerated(n) == brute_force_classical_bound(n) == n - 2
    assert classical_bound_enumerated(8) == 6
    for n in (2, 25):
        with pytest.raises(ValueError):
            classical_bound_enumerated(n)


def test_randomness_functional_examples(rng):
    r = randomness_functional(random_full_rank_state(2, 5), canonical_observables(4), 2, 4)
    assert r == pytest.approx(2 * math.sqrt(2), abs=1e-10)
    assert randomness_functional(maximally_mixed(2), [Z] * 4, 2, 4) == pytest.approx(4 - 2 - 1)
    for k in range(50):
        obs = random_observable_set(4, 2, rng)
        rho = random_full_rank_state(2, k)
        assert randomness_functional(rho, obs, 2, 3) <= lg_value(rho, obs).value + 1e-15


@pytest.mark.parametrize("n,i,N", [(5, 2, 3), (4, 1, 3), (4, 3, 3), (4, 2, 1)])
def test_randomness_functional_errors(n, i, N):
    with pytest.raises(ValueError):
        randomness_functional(maximally_mixed(2), canonical_observables(n), i, N)


def test_sos_coefficients():
    a, b = sos_coefficients(4)[0]
    assert a == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert b == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    for n in (3, 7, 12):
        for i, (a, b) in enumerate(sos_coefficients(n), start=1):
            assert abs(a - math.sin(math.pi * i / n) / math.sin(math.pi * (i + 1) / n)) < 1e-12
            assert abs(b - math.sin(math.pi / n) / math.sin(math.pi * (i + 1) / n)) < 1e-12


def test_sos_certificate_exact_at_maximizer():
    cert = sos_certificate(canonical_observables(5), maximally_mixed(2))
    assert len(cert.operators) == 3
    assert cert.identity_residual < 1e-10
    assert max(cert.expectation_residuals) < 1e-10


def test_sos_certificate_detects_perturbation():
    obs = perturbed_observables(4, 0.1)
    cert = sos_certificate(obs, maximally_mixed(2))
    assert cert.identity_residual < 1e-10
    assert all(r > 0 for r in cert.expectation_residuals)
    assert lg_value(maximally_mixed(2), obs).value < quantum_bound(4)


def test_sos_identity_holds_for_any_involutions(rng):
    for k in range(100):
        n = 3 + k % 4
        d = (2, 3, 4)[k % 3]
        obs = random_observable_set(n, d, rng)
        assert sos_certificate(obs, maximally_mixed(d)).identity_residual < 1e-10


def _t_telescoped(n, i):
    s = math.sin(math.pi / n)
    cot = lambda t: math.cos(t) / math.sin(t)
    return 2 * math.cos(math.pi / n) + 2 * s * (cot(math.pi * i / n) - cot(math.pi * (i + 1) / n))


def test_trig_identity():
    assert abs(sum(_t_telescoped(6, i) for i in range(1, 5)) - 6 * math.sqrt(3)) < 1e-12
    assert trig_identity_check(6) < 1e-12
    assert trig_identity_check(3) < 1e-12
    assert _t_telescoped(3, 1) == pytest.approx(3.0, abs=1e-12)
    assert trig_identity_check(100) < 1e-10


def test_self_test_fixed_point():
    res = extract_certification_unitary(canonical_observables(5))
    assert res.max_deviation < 1e-10
    U = res.unitary
    phase = U[0, 0]
    assert abs(abs(phase) - 1) < 1e-12
    assert nk.op_distance(U, phase * np.eye(2)) < 1e-10


def test_self_test_planted_roundtrip():
    obs, W = planted_observables(4, 2, seed=3)
    res = extract_certification_unitary(obs)
    assert res.max_deviation < 1e-8
    assert nk.op_distance(res.unitary @ res.unitary.conj().T, np.eye(4)) < 1e-10
    assert res.traceless_check < 1e-9
    assert res.anticommutator_check < 1e-9
    assert res.aux_dim == 2


def test_self_test_is_deterministic():
    obs, _ = planted_observables(6, 3, seed=1)
    a = extract_certification_unitary(obs).unitary
    b = extract_certification_unitary(obs).unitary
    assert np.array_equal(a, b)


def test_self_test_rejects_non_maximizer():
    with pytest.raises(CertificationError):
        extract_certification_unitary(perturbed_observables(4, 0.1))


def test_self_test_rejects_odd_dimension(rng):
    obs = random_observable_set(4, 3, rng)
    with pytest.raises(CertificationError):
        extract_certification_unitary(obs)


def test_self_test_rejects_rank_deficient_state():
    with pytest.raises(CertificationError):
        extract_certification_unitary(canonical_observables(4), state=KET0)


def test_self_test_uses_supplied_state():
    obs, _ = planted_observables(3, 2, seed=9)
    res = extract_certification_unitary(obs, state=random_full_rank_state(4, 2))
    assert res.max_deviation < 1e-8
