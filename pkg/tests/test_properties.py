import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lgtoolkit.lgcert import (
    classical_bound,
    lg_value,
    quantum_bound,
    sos_certificate,
    trig_identity_check,
)
from lgtoolkit.quantum import canonical_observables, random_full_rank_state, random_observable
from lgtoolkit.randcert import helstrom_success, overlap_factor
from lgtoolkit.seqsim import simulate_projective

seeds = st.integers(0, 2**31 - 1)


@given(n=st.integers(3, 16), seed=seeds)
def test_lg_value_is_state_independent(n, seed):
    v = lg_value(random_full_rank_state(2, seed), canonical_observables(n)).value
    assert abs(v - quantum_bound(n)) < 1e-10


@given(n=st.integers(3, 200))
def test_quantum_exceeds_classical(n):
    assert quantum_bound(n) > classical_bound(n)
    assert trig_identity_check(n) < 1e-10


@settings(max_examples=50)
@given(n=st.integers(3, 7), d=st.sampled_from([2, 3, 4]), seed=seeds)
def test_sos_identity_and_bound(n, d, seed):
    rng = np.random.default_rng(seed)
    obs = [random_observable(d, rng) for _ in range(n)]
    rho = random_full_rank_state(d, seed)
    cert = sos_certificate(obs, rho)
    assert cert.identity_residual < 1e-10
    assert min(cert.expectation_residuals) > -1e-12
    assert lg_value(rho, obs).value <= quantum_bound(n) + 1e-9


@settings(max_examples=50)
@given(seed=seeds, xs=st.lists(st.integers(1, 5), min_size=1, max_size=6))
def test_distribution_is_normalised(seed, xs):
    dist = simulate_projective(random_full_rank_state(2, seed), canonical_observables(5), tuple(xs))
    assert abs(dist.table.sum() - 1) < 1e-12
    assert dist.table.min() > -1e-15


@given(
    n=st.sampled_from([4, 6, 8, 10, 12]),
    N=st.integers(1, 7),
    data=st.data(),
)
def test_alternating_overlap_is_uniform(n, N, data):
    i = data.draw(st.integers(2, n // 2))
    a = data.draw(st.lists(st.integers(0, 1), min_size=N, max_size=N))
    xs = [i if k % 2 == 0 else i + n // 2 for k in range(N)]
    assert abs(overlap_factor(n, xs, a) - 2.0 ** -(N - 1)) < 1e-13


@given(seed=seeds, w=st.floats(0.0, 1.0))
def test_helstrom_between_prior_and_one(seed, w):
    s0 = w * random_full_rank_state(3, seed).matrix
    s1 = (1 - w) * random_full_rank_state(3, seed + 1).matrix
    p = helstrom_success(s0, s1)
    assert max(w, 1 - w) - 1e-12 <= p <= 1 + 1e-12
