"""Resource-theory adapters: athermality and coherence.

Athermality compares states against a Gibbs state: the relative entropy to the
Gibbs state orders states by extractable work, and the free energy is reported
in bits (base-2 logarithms throughout; multiply by k_B T ln 2 for physical
units — a display conversion this module deliberately leaves to callers).

Coherence works against the completely dephasing channel: a channel is
dephasing-covariant (DIO) when it commutes with dephasing as a superoperator,
and the distillable coherence of a state is its relative entropy to its own
dephased version.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channels import GeneralChannel, TestAndPrepareChannel
from .divergences import relative_entropy
from .states import (DensityMatrix, Dichotomy, ValidationError,
                     matrix_from_json, matrix_to_json)

_LOG2 = math.log(2.0)

#: relative width of the verdict band around equal relative entropies
NEAR_CRITICAL_BAND = 0.02

#: superoperator equality tolerance for the dephasing-covariance check
DIO_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GibbsSpec:
    """An energy observable and inverse temperature defining a Gibbs state."""

    hamiltonian: np.ndarray
    beta: float

    def __post_init__(self):
        try:
            h = linalg.as_hermitian(self.hamiltonian)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
        if not (float(self.beta) > 0.0) or math.isinf(self.beta):
            raise ValidationError(
                f"beta must be a positive finite number, got {self.beta!r}")
        h.flags.writeable = False
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "beta", float(self.beta))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def gibbs_spec_to_json(g: GibbsSpec) -> dict:
    return {"hamiltonian": matrix_to_json(g.hamiltonian), "beta": g.beta}


def gibbs_spec_from_json(obj) -> GibbsSpec:
    if not isinstance(obj, dict) or "hamiltonian" not in obj or "beta" not in obj:
        raise ValidationError('Gibbs JSON must contain "hamiltonian" and "beta"')
    return GibbsSpec(matrix_from_json(obj["hamiltonian"]), float(obj["beta"]))


def gibbs_state(g: GibbsSpec) -> DensityMatrix:
    """Thermal state exp(-beta*H) normalized by its partition function."""
    w, v = linalg.eigh(g.hamiltonian)
    # shift by the ground energy before exponentiating to avoid overflow
    boltz = np.exp(-g.beta * (w - float(w[0])))
    boltz /= float(np.sum(boltz))
    return DensityMatrix((v * boltz) @ v.conj().T)


def log_partition_bits(g: GibbsSpec) -> float:
    """log2 of the partition function tr exp(-beta*H)."""
    w = linalg.eigh(g.hamiltonian).eigenvalues
    shift = -g.beta * float(w[0])
    return (shift + math.log(float(np.sum(np.exp(-g.beta * w - shift))))) / _LOG2


def free_energy(rho: DensityMatrix, g: GibbsSpec) -> float:
    """Free energy in bits: energy plus temperature-weighted negentropy.

    Computed two independent ways — directly from tr(rho H) and the entropy,
    and from the relative entropy to the Gibbs state minus the log-partition
    function — and cross-checked to 1e-8 before returning.
    """
    if rho.dim != g.dim:
        raise ValidationError(
            f"state dimension {rho.dim} does not match observable dimension {g.dim}")
    energy = float(np.real(np.trace(rho.mat @ g.hamiltonian)))
    w = rho.eigenvalues()
    w = w[w > 0.0]
    entropy_nat = -float(np.sum(w * np.log(w)))
    direct = (energy - entropy_nat / g.beta) / _LOG2

    gamma = gibbs_state(g)
    via_divergence = (relative_entropy(Dichotomy(rho, gamma))
                      - log_partition_bits(g)) / g.beta
    if abs(direct - via_divergence) > 1e-8:
        raise ArithmeticError(
            f"free-energy cross-check failed: {direct!r} vs {via_divergence!r}")
    return direct


@dataclass
class AthermalityReport:
    verdict: str
    lambda1_bits: float
    lambda2_bits: float
    free_energy1_bits: float
    free_energy2_bits: float


def athermality_feasible(rho1: DensityMatrix, rho2: DensityMatrix,
                         g: GibbsSpec) -> AthermalityReport:
    """Can many copies of rho1 be converted to as many copies of rho2 by
    Gibbs-preserving maps?  Decided by comparing relative entropies to the
    Gibbs state, with a near-critical band where the answer is left open.
    """
    if rho1.dim != rho2.dim:
        raise ValidationError(
            f"state dimensions differ: {rho1.dim} vs {rho2.dim}")
    gamma = gibbs_state(g)
    lam1 = relative_entropy(Dichotomy(rho1, gamma))
    lam2 = relative_entropy(Dichotomy(rho2, gamma))
    band = NEAR_CRITICAL_BAND * max(lam1, lam2)
    if abs(lam1 - lam2) <= band:
        verdict = "NearCritical"
    elif lam1 > lam2:
        verdict = "AsymptoticallyFeasible"
    else:
        verdict = "StrongConverseRegime"
    return AthermalityReport(verdict, lam1, lam2,
                             free_energy(rho1, g), free_energy(rho2, g))


# ---------------------------------------------------------------------------
# coherence

def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Remove all off-diagonal matrix elements (computational basis)."""
    return DensityMatrix(np.diag(np.diag(rho.mat)))


def dephase_channel(dim: int) -> GeneralChannel:
    """The completely dephasing channel as an explicit Kraus map."""
    kraus = []
    for i in range(dim):
        k = np.zeros((dim, dim), dtype=complex)
        k[i, i] = 1.0
        kraus.append(k)
    return GeneralChannel(tuple(kraus))


def _apply(channel, mat: np.ndarray) -> np.ndarray:
    if isinstance(channel, (GeneralChannel, TestAndPrepareChannel)):
        return channel.apply(mat)
    raise ValidationError(f"unsupported channel type {type(channel).__name__}")


def _diag_only(mat: np.ndarray) -> np.ndarray:
    return np.diag(np.diag(mat))


def dio_defect(channel) -> tuple[float, tuple[int, int]]:
    """Largest deviation between dephase-then-apply and apply-then-dephase.

    Scans all matrix units (exact for linear maps); returns the deviation and
    the (row, column) of the worst input unit.
    """
    dim = channel.in_dim
    worst = 0.0
    worst_unit = (0, 0)
    for i in range(dim):
        for j in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1.0
            lhs = _apply(channel, _diag_only(unit))
            rhs = _diag_only(_apply(channel, unit))
            dev = float(np.max(np.abs(lhs - rhs)))
            if dev > worst:
                worst, worst_unit = dev, (i, j)
    return worst, worst_unit


def is_dio(channel) -> bool:
    """Whether the channel commutes with complete dephasing as a superoperator."""
    return dio_defect(channel)[0] <= DIO_TOL


def is_rho_dio(channel, rho: DensityMatrix) -> bool:
    """Whether the channel commutes with dephasing on this particular state."""
    if rho.dim != channel.in_dim:
        raise ValidationError(
            f"state dimension {rho.dim} does not match channel input {channel.in_dim}")
    lhs = _apply(channel, _diag_only(rho.mat))
    rhs = _diag_only(_apply(channel, rho.mat))
    return float(np.max(np.abs(lhs - rhs))) <= DIO_TOL


def coherence_distillation_rate(rho: DensityMatrix) -> float:
    """Distillable coherence in bits per copy: relative entropy to the
    dephased state."""
    return relative_entropy(Dichotomy(rho, dephase(rho)))


def dio_transformation_rate(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Copies of sigma obtainable per copy of rho under dephasing-covariant
    maps: the ratio of the two distillable coherences.

    An incoherent (diagonal) target costs nothing, so the rate is then
    unbounded and math.inf is returned.
    """
    top = coherence_distillation_rate(rho)
    bottom = coherence_distillation_rate(sigma)
    if bottom <= 0.0:
        return math.inf
    return top / bottom


def coherence_dichotomy(rho: DensityMatrix) -> Dichotomy:
    """The pair (rho, dephased rho) driving coherence conversion experiments."""
    return Dichotomy(rho, dephase(rho))
