"""Building the channel that carries one dichotomy onto another.

Every map this library synthesizes has the same two-step anatomy: measure a
binary effect E, then prepare one of two fixed states depending on the
outcome.  That tiny family is enough to move (rho1, sigma1) onto
(rho2, sigma2) exactly whenever an exact conversion exists at all, and to
move it approximately whenever a one-shot divergence comparison says the
error budgets suffice.  When neither holds, synthesis refuses loudly
instead of returning a broken channel.

Run with:  python3 demos/03_channel_synthesis.py
"""

import numpy as np

from dichotomies.channels import (
    SynthesisRefusedError,
    channel_from_json,
    channel_to_json,
    synthesize_approx,
    synthesize_exact,
    synthesize_exact_binary,
    verify_transformation,
)
from dichotomies.states import (
    BinaryDistribution,
    DensityMatrix,
    Dichotomy,
    Metric,
    classical_dichotomy,
    classical_embed,
    random_density,
)

# ---------------------------------------------------------------------------
# Exact conversion between classical binary pairs.

src = classical_dichotomy([0.9, 0.1], [0.5, 0.5])
dst = classical_dichotomy([0.75, 0.25], [0.5, 0.5])

channel = synthesize_exact(src, dst)
print("== exact: sharp coin pair -> soft coin pair ==")
print(f"effect diagonal : {np.real(np.diag(channel.effect.mat))}")
print(f"accept prep     : {np.real(np.diag(channel.prep_accept.mat))}")
print(f"reject prep     : {np.real(np.diag(channel.prep_reject.mat))}")
for metric in (Metric.TRACE, Metric.PURIFIED):
    rep = verify_transformation(channel, src, dst, metric)
    print(f"{metric.value:>8} errors : rho {rep.rho_error:.2e}, "
          f"sigma {rep.sigma_error:.2e}")
print()

# The same binary source can be pushed onto a *coherent* target: the two
# preparations just become non-diagonal states.
plus = np.array([[0.5, 0.5], [0.5, 0.5]])
rho2 = DensityMatrix(0.5 * plus + 0.25 * np.eye(2))
sigma2 = DensityMatrix(np.eye(2) / 2)
coherent = synthesize_exact_binary(
    BinaryDistribution(0.9), BinaryDistribution(0.5), Dichotomy(rho2, sigma2))
rep = verify_transformation(coherent, src, Dichotomy(rho2, sigma2))
print("== exact: coin pair -> coherent qubit pair ==")
print(f"accept prep (has off-diagonals):\n{np.round(coherent.prep_accept.mat.real, 6)}")
print(f"trace errors : rho {rep.rho_error:.2e}, sigma {rep.sigma_error:.2e}")
print()

# ---------------------------------------------------------------------------
# Support-deficient sources convert exactly via a projective test, even
# beyond binary: here rho1 lives on one level of a three-level system.

src3 = Dichotomy(classical_embed([1.0, 0.0, 0.0]), classical_embed([0.2, 0.5, 0.3]))
dst2 = classical_dichotomy([0.8, 0.2], [0.5, 0.5])
route = synthesize_exact(src3, dst2)
rep = verify_transformation(route, src3, dst2)
print("== exact via support projection (3-level -> qubit) ==")
print(f"errors : rho {rep.rho_error:.2e}, sigma {rep.sigma_error:.2e}")
print()

# ---------------------------------------------------------------------------
# Exact synthesis refuses when no two-outcome route exists.

hard_src = Dichotomy(random_density(3, seed=31), random_density(3, seed=32))
hard_dst = Dichotomy(random_density(2, seed=33), random_density(2, seed=34))
print("== exact synthesis refusal on a full-rank source ==")
try:
    synthesize_exact(hard_src, hard_dst)
except SynthesisRefusedError as exc:
    print(f"refused: {exc}")
print()

# ---------------------------------------------------------------------------
# Approximate conversion: spend eps1 smoothing the source leg and eps2 on
# the prepared output, and the library certifies the resulting rho error.

q_rho2 = random_density(2, seed=11)
q_sigma2 = DensityMatrix(0.6 * q_rho2.mat + 0.2 * np.eye(2))
q_dst = Dichotomy(q_rho2, q_sigma2)

result = synthesize_approx(src, q_dst, eps1=0.2, eps2=0.1)
rep = verify_transformation(result.channel, src, q_dst, result.metric)
print("== approximate: coin pair -> quantum pair, budgets (0.2, 0.1) ==")
print(f"source D_h^eps1        : {result.dh_bits:.6f} bits")
print(f"target D_max^eps2      : {result.dmax_bits:.6f} bits (must not exceed)")
print(f"certified rho error    : {result.certified_rho_error:.6f}")
print(f"measured rho error     : {rep.rho_error:.6f}")
print(f"measured sigma error   : {rep.sigma_error:.2e}  (sigma leg stays exact)")
assert rep.rho_error <= result.certified_rho_error + 1e-9
assert rep.sigma_error <= 1e-8
print()

# An underpowered source is refused rather than silently over-spending.
weak = classical_dichotomy([0.55, 0.45], [0.5, 0.5])
sharp = classical_dichotomy([0.99, 0.01], [0.5, 0.5])
print("== approximate synthesis refusal ==")
try:
    synthesize_approx(weak, sharp, eps1=0.1, eps2=0.05)
except SynthesisRefusedError as exc:
    print(f"refused: {exc}")
print()

# ---------------------------------------------------------------------------
# Channels serialize to plain JSON and come back bit-for-bit equivalent.

blob = channel_to_json(result.channel)
restored = channel_from_json(blob)
probe = src.rho.mat
assert np.allclose(restored.apply(probe), result.channel.apply(probe), atol=1e-12)
print("JSON roundtrip preserved the channel's action exactly")
print(f"serialized keys: {sorted(blob)}")
