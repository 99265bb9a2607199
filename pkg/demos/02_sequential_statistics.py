"""Sequential measurement statistics, Zeno conditions and NSIT.

Quantum sequential measurements generally signal in time: measuring A_2 first
changes the marginal of A_1.  A noisy (non-projective) device is exposed by
repeating the same measurement twice.
"""
import numpy as np

from lgtoolkit import (
    BinaryInstrument,
    DensityState,
    canonical_observable,
    canonical_observables,
    check_nsit,
    check_zeno,
    maximally_mixed,
    simulate_projective,
    single_shot_marginals,
)

obs = canonical_observables(4)
ket0 = DensityState(np.diag([1.0, 0.0]))

dist = simulate_projective(ket0, obs, (2, 1))
print("p(a1, a2 | x = (2, 1)) on |0>:")
for a, p in dist.probabilities.items():
    print(f"  {a}: {p:.6f}")

nsit = check_nsit(dist, single_shot_marginals(ket0, obs))
print(f"NSIT deviation per position: {[round(d, 6) for d in nsit.per_position]}")

rho = maximally_mixed(2)
for label, inst in [
    ("ideal", BinaryInstrument.projective(canonical_observable(4, 1))),
    ("noisy 0.8/0.2", BinaryInstrument.noisy(canonical_observable(4, 1), 0.8)),
]:
    z = check_zeno(rho, inst)
    print(f"Zeno check, {label:<14} violation = {z.max_violation:.3g}  passes: {z.passes}")
