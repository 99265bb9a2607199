"""Classical versus quantum Leggett-Garg bounds.

Enumerates every deterministic +-1 assignment to get the macrorealist bound,
then evaluates the canonical qubit observables on a few very different states
to show the quantum value n cos(pi/n) does not depend on the state.
"""
from lgtoolkit import (
    canonical_observables,
    classical_bound_enumerated,
    lg_value,
    maximally_mixed,
    quantum_bound,
    random_full_rank_state,
    random_pure_state,
)

print(f"{'n':>3} {'classical':>9} {'quantum':>10} {'gap':>8}")
for n in range(3, 11):
    c, q = classical_bound_enumerated(n), quantum_bound(n)
    print(f"{n:>3} {c:>9d} {q:>10.6f} {q - c:>8.4f}")

n = 6
obs = canonical_observables(n)
print(f"\nL for canonical observables, n={n}:")
for name, rho in [
    ("maximally mixed", maximally_mixed(2)),
    ("pure (seed 1)", random_pure_state(2, 1)),
    ("full rank (seed 2)", random_full_rank_state(2, 2)),
]:
    v = lg_value(rho, obs)
    print(f"  {name:<20} L = {v.value:.12f}  violates classical: {v.violates_classical}")
