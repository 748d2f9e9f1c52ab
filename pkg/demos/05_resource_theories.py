"""Two resource theories riding on the same dichotomy machinery.

Athermality: fix an energy observable and an inverse temperature; the Gibbs
state is the free state, and a state is resourceful exactly when it differs
from it.  Whether many copies of one state can become as many copies of
another under Gibbs-preserving maps reduces to comparing relative entropies
to the Gibbs state -- a dichotomy computation.

Coherence: fix a basis; diagonal states are free, and dephasing-covariant
channels (DIO) are the free operations.  The distillable coherence of rho is
the relative entropy between rho and its dephased twin -- again a dichotomy.

Run with:  python3 demos/05_resource_theories.py
"""

import math

import numpy as np

from dichotomies.asymptotics import critical_rate
from dichotomies.channels import GeneralChannel, random_channel
from dichotomies.resource import (
    GibbsSpec,
    athermality_feasible,
    coherence_dichotomy,
    coherence_distillation_rate,
    dephase,
    dephase_channel,
    dio_defect,
    dio_transformation_rate,
    free_energy,
    gibbs_state,
    is_dio,
    is_rho_dio,
    log_partition_bits,
)
from dichotomies.states import DensityMatrix, random_density

# ---------------------------------------------------------------------------
# Athermality: a two-level system at inverse temperature 1.

spec = GibbsSpec(np.diag([0.0, 1.0]), beta=1.0)
gamma = gibbs_state(spec)
z = 1.0 + math.exp(-1.0)
print("== thermal reference ==")
print(f"Gibbs populations : {np.real(np.diag(gamma.mat))}")
print(f"expected          : [{1 / z:.8f} {math.exp(-1) / z:.8f}]")
print(f"log2 partition fn : {log_partition_bits(spec):.8f}")
print()

ground = DensityMatrix(np.diag([1.0, 0.0]))
excited = DensityMatrix(np.diag([0.0, 1.0]))
print("== Helmholtz free energies, beta-weighted, in bits ==")
for name, state in (("ground", ground), ("excited", excited), ("Gibbs", gamma)):
    print(f"  {name:<8}: {free_energy(state, spec):+.6f}")
# the Gibbs value is -log2(Z), the textbook identity
assert abs(free_energy(gamma, spec) + log_partition_bits(spec)) <= 1e-12

# The Gibbs state is the unique minimizer; spot-check against random states.
floor = free_energy(gamma, spec)
assert all(free_energy(random_density(2, seed=s), spec) >= floor - 1e-10
           for s in range(20))
print("no random state undercuts the Gibbs free energy (20 draws)")
print()

# Asymptotic convertibility under Gibbs-preserving maps is a one-line verdict.
mixed = DensityMatrix(np.eye(2) / 2)
report = athermality_feasible(excited, mixed, spec)
print("== can many excited states become maximally mixed ones? ==")
print(f"verdict            : {report.verdict}")
print(f"resource content   : {report.lambda1_bits:.6f} vs "
      f"{report.lambda2_bits:.6f} bits (relative entropy to Gibbs)")
print(f"free energies      : {report.free_energy1_bits:+.6f} vs "
      f"{report.free_energy2_bits:+.6f} bits")
reverse = athermality_feasible(mixed, excited, spec)
print(f"reverse direction  : {reverse.verdict}")
print()

# ---------------------------------------------------------------------------
# Coherence: dephasing, free operations, and what is free to check.

plus = DensityMatrix(np.full((2, 2), 0.5))
print("== dephasing ==")
print(f"|+> dephased -> diagonal {np.real(np.diag(dephase(plus).mat))}")

delta = dephase_channel(2)
print(f"the dephasing channel itself is DIO : {is_dio(delta)}")

# A generic channel creates coherences from diagonal inputs, so it fails the
# DIO test; the defect report names the worst matrix unit.
noisy = random_channel(2, seed=12)
defect, where = dio_defect(noisy)
print(f"random channel DIO defect           : {defect:.4f} at unit {where}")
assert not is_dio(noisy)

# Some channels are only free *relative to a particular state*: the unitary
# that maps the diagonal onto the coherent axis commutes with dephasing on
# the maximally mixed state but on nothing sharper.
h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
rotate = GeneralChannel((h,))
print(f"basis-rotating unitary: DIO overall   {is_dio(rotate)}")
print(f"  free relative to I/2              : {is_rho_dio(rotate, mixed)}")
print(f"  free relative to diag(0.9, 0.1)   : "
      f"{is_rho_dio(rotate, DensityMatrix(np.diag([0.9, 0.1])))}")
print()

# ---------------------------------------------------------------------------
# Distillable coherence and conversion rates between coherent states.

tilted = DensityMatrix(np.array([[0.75, 0.25], [0.25, 0.25]]))
print("== distillable coherence (bits per copy) ==")
print(f"  |+>            : {coherence_distillation_rate(plus):.6f}")
print(f"  tilted state   : {coherence_distillation_rate(tilted):.6f}")
print(f"  diagonal state : {coherence_distillation_rate(ground):.6f}")

rate = dio_transformation_rate(plus, tilted)
print(f"copies of the tilted state per |+> under DIO : {rate:.6f}")
print(f"diagonal targets are free, so their rate is  : "
      f"{dio_transformation_rate(plus, ground)}")

# The conversion rate is exactly the critical rate of the two coherence
# dichotomies (state vs its dephased twin) -- the same machinery as demo 04.
via_dichotomies = critical_rate(coherence_dichotomy(plus),
                                coherence_dichotomy(tilted))
assert abs(rate - via_dichotomies) <= 1e-12
print(f"cross-check via the dichotomy rate formula   : {via_dichotomies:.6f}")
