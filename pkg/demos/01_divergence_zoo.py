"""A tour of the divergence zoo on two fixed pairs of states.

Every quantity in this library takes a dichotomy -- an ordered pair of
density matrices (rho, sigma) -- and returns bits.  This script evaluates
the whole family on the same two pairs and then checks the orderings that
make the family coherent: monotonicity in the Renyi order, dominance of the
Petz values over the sandwiched ones, the d_min <= D <= d_max sandwich, and
contraction of everything under a channel applied to both legs.

Run with:  python3 demos/01_divergence_zoo.py
"""

import numpy as np

from dichotomies.channels import random_channel
from dichotomies.divergences import (
    d_max,
    d_min,
    petz_renyi,
    relative_entropy,
    relative_entropy_variance,
    sandwiched_renyi,
)
from dichotomies.states import (
    DensityMatrix,
    Dichotomy,
    classical_dichotomy,
    random_density,
)

# ---------------------------------------------------------------------------
# Two working pairs: a classical coin pair and a generic full-rank qubit pair.

coins = classical_dichotomy([0.9, 0.1], [0.5, 0.5])
qubits = Dichotomy(random_density(2, seed=7), random_density(2, seed=8))

for name, d in (("biased vs fair coin", coins), ("random qubit pair", qubits)):
    print(f"== {name} ==")
    print(f"  relative entropy D        : {relative_entropy(d):.6f} bits")
    print(f"  relative entropy variance : {relative_entropy_variance(d):.6f} bits^2")
    print(f"  d_min                     : {d_min(d):.6f} bits")
    print(f"  d_max                     : {d_max(d):.6f} bits")
    print()

# The coin pair is the recurring benchmark: D(0.9,0.1 || 0.5,0.5) = 0.531004.

# ---------------------------------------------------------------------------
# The two Renyi families, side by side over a grid of orders.

print("== Renyi families on the coin pair ==")
print(f"{'alpha':>6} {'petz':>10} {'sandwiched':>11}")
alphas = [0.5, 0.75, 0.99, 1.01, 1.5, 2.0]
for alpha in alphas:
    p = petz_renyi(coins, alpha)
    s = sandwiched_renyi(coins, alpha)
    print(f"{alpha:>6.2f} {p:>10.6f} {s:>11.6f}")
print(f"{'inf':>6} {'':>10} {sandwiched_renyi(coins, float('inf')):>11.6f}"
      "   (order infinity recovers d_max)")
print()

# Both families are non-decreasing in alpha and meet the relative entropy as
# alpha -> 1; the sandwiched value never exceeds the Petz value.  Check all
# three facts on the *quantum* pair where they are not obvious.

petz_vals = [petz_renyi(qubits, a) for a in alphas]
sand_vals = [sandwiched_renyi(qubits, a) for a in alphas]
assert all(b >= a - 1e-10 for a, b in zip(petz_vals, petz_vals[1:]))
assert all(b >= a - 1e-10 for a, b in zip(sand_vals, sand_vals[1:]))
assert all(s <= p + 1e-10 for p, s in zip(petz_vals, sand_vals))
near_one = sandwiched_renyi(qubits, 1.0 + 1e-6)
print(f"sandwiched at alpha=1+1e-6 : {near_one:.8f}")
print(f"relative entropy           : {relative_entropy(qubits):.8f}")
print("monotonicity and sandwiched<=petz hold on the random qubit pair")
print()

# ---------------------------------------------------------------------------
# The min/max sandwich and an infinite value.

d = qubits
assert d_min(d) - 1e-10 <= relative_entropy(d) <= d_max(d) + 1e-10
print(f"d_min <= D <= d_max: {d_min(d):.4f} <= "
      f"{relative_entropy(d):.4f} <= {d_max(d):.4f}")

# d_min only leaves zero when rho's support is strictly smaller than full:
# a pure state against the maximally mixed qubit gives exactly one bit.
pure = random_density(2, rank=1, seed=3)
mixed = DensityMatrix(np.eye(2) / 2)
print(f"d_min(pure || maximally mixed) = {d_min(Dichotomy(pure, mixed)):.6f}")

# When rho's support leaks outside sigma's, the max-divergence (and the
# relative entropy) blow up; the library returns an honest IEEE infinity.
leaky = Dichotomy(mixed, pure)   # full-rank rho against a pure sigma
print(f"D(full-rank || pure) = {relative_entropy(leaky)}  (support mismatch)")
print()

# ---------------------------------------------------------------------------
# Data processing: push both legs through the same channel; nothing grows.

print("== contraction under a random channel ==")
channel = random_channel(2, seed=21)
mapped = Dichotomy(channel.apply_state(qubits.rho), channel.apply_state(qubits.sigma))
rows = [
    ("relative entropy", relative_entropy),
    ("petz alpha=0.7", lambda x: petz_renyi(x, 0.7)),
    ("sandwiched alpha=2", lambda x: sandwiched_renyi(x, 2.0)),
    ("d_min", d_min),
    ("d_max", d_max),
]
for label, fn in rows:
    before, after = fn(qubits), fn(mapped)
    assert after <= before + 1e-9
    print(f"  {label:<20} {before:>9.6f} -> {after:>9.6f} bits")
print("all divergences contracted, as they must")
