"""Randomness from alternating certified measurements.

The closed form gives N-1 bits from N measurements.  The brute-force adversary
reaches it when she can tell the first outcome from her share, as with a
maximally entangled state, and falls below it otherwise.
"""
import numpy as np

from lgtoolkit import (
    AdversaryScenario,
    eve_oracle,
    guessing_probability_certified,
    purification,
    random_full_rank_state,
)

for N in (1, 2, 5, 10, 20):
    r = guessing_probability_certified(4, N)
    print(f"N={N:<3} p_guess={r.p_guess:.3e}  {r.min_entropy_bits:.0f} bits")

bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
rho = random_full_rank_state(2, 3)
print("\nadversary oracle, n=4:")
for N in (2, 3, 4):
    closed = 2.0 ** -(N - 1)
    ent = eve_oracle(AdversaryScenario.alternating(bell, 2, 2, 4, N)).p_guess
    gen = eve_oracle(AdversaryScenario.alternating(purification(rho, 2), 2, 2, 4, N)).p_guess
    print(f"N={N}  closed {closed:.4f}  maximally entangled {ent:.4f}  generic full rank {gen:.4f}")
