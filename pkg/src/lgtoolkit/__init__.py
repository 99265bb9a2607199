"""Sequential-measurement (Leggett-Garg) certification toolkit.

Simulates sequential quantum measurements, evaluates LG functionals against
their classical and quantum bounds, self-tests qubit measurements from
maximal violation and quantifies the certified randomness of measurement
sequences.
"""
__version__ = "0.1.0"

from .quantum import (
    BinaryInstrument,
    BinaryPovm,
    DensityState,
    DichotomicObservable,
    canonical_observable,
    canonical_observables,
    eigenstate,
    maximally_mixed,
    random_full_rank_state,
    random_pure_state,
)
from .seqsim import (
    SequenceDistribution,
    check_nsit,
    check_zeno,
    is_projective,
    simulate_instrument,
    simulate_projective,
    single_shot_marginals,
)
from .lgcert import (
    CertificationError,
    classical_bound,
    classical_bound_enumerated,
    extract_certification_unitary,
    lg_value,
    multi_time_correlation,
    perturbed_observables,
    planted_observables,
    quantum_bound,
    randomness_functional,
    sos_certificate,
    trig_identity_check,
    two_time_correlation,
)
from .randcert import (
    AdversaryScenario,
    eve_oracle,
    guessing_probability_certified,
    min_entropy,
    overlap_factor,
    purification,
)
