"""Channels that transform one dichotomy into another, and their synthesis.

The central object is the test-and-prepare channel

    E(X) = tr(Q X) * g1 + tr((1 - Q) X) * g2

which measures a binary effect Q and prepares one of two fixed states.  Exact
synthesis decides whether a source pair can be mapped onto a target pair with
zero error and, when possible, returns such a channel; approximate synthesis
relaxes both legs by smoothing parameters and returns a channel with a
certified error budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import divergences, linalg
from .oneshot import Effect, hypothesis_testing, smooth_dmax
from .states import (BinaryDistribution, DensityMatrix, Dichotomy, Metric,
                     ValidationError, clip_to_state, matrix_from_json,
                     matrix_to_json, state_from_json, state_to_json)

#: slack allowed when testing synthesis feasibility conditions
FEASIBILITY_TOL = 1e-10


class SynthesisRefusedError(RuntimeError):
    """No channel with the requested guarantees exists for these inputs."""


@dataclass(frozen=True, eq=False)
class TestAndPrepareChannel:
    """Measure ``effect`` and prepare ``prep_accept`` or ``prep_reject``."""

    effect: Effect
    prep_accept: DensityMatrix
    prep_reject: DensityMatrix

    def __post_init__(self):
        if self.prep_accept.dim != self.prep_reject.dim:
            raise ValidationError(
                f"preparation dimensions differ: {self.prep_accept.dim} vs "
                f"{self.prep_reject.dim}")

    @property
    def in_dim(self) -> int:
        return self.effect.dim

    @property
    def out_dim(self) -> int:
        return self.prep_accept.dim

    def apply(self, mat: np.ndarray) -> np.ndarray:
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (self.in_dim, self.in_dim):
            raise ValidationError(
                f"channel input must be {self.in_dim}x{self.in_dim}, got {mat.shape}")
        a = complex(np.trace(self.effect.mat @ mat))
        total = complex(np.trace(mat))
        return a * self.prep_accept.mat + (total - a) * self.prep_reject.mat

    def apply_state(self, dm: DensityMatrix) -> DensityMatrix:
        return clip_to_state(self.apply(dm.mat), tol=1e-8)


@dataclass(frozen=True, eq=False)
class GeneralChannel:
    """A completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        d_in = ops[0].shape[1]
        if any(k.ndim != 2 or k.shape[1] != d_in for k in ops):
            raise ValidationError("Kraus operators must share their input dimension")
        d_out = ops[0].shape[0]
        if any(k.shape[0] != d_out for k in ops):
            raise ValidationError("Kraus operators must share their output dimension")
        total = sum(k.conj().T @ k for k in ops)
        if float(np.max(np.abs(total - np.eye(d_in)))) > 1e-9:
            raise ValidationError("Kraus operators do not preserve the trace")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "kraus", ops)

    @property
    def in_dim(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, mat: np.ndarray) -> np.ndarray:
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (self.in_dim, self.in_dim):
            raise ValidationError(
                f"channel input must be {self.in_dim}x{self.in_dim}, got {mat.shape}")
        out = np.zeros((self.out_dim, self.out_dim), dtype=complex)
        for k in self.kraus:
            out += k @ mat @ k.conj().T
        return out

    def apply_state(self, dm: DensityMatrix) -> DensityMatrix:
        return clip_to_state(self.apply(dm.mat), tol=1e-8)


# ---------------------------------------------------------------------------
# exact synthesis

def _prep_or_none(mat: np.ndarray) -> DensityMatrix | None:
    w = np.linalg.eigvalsh(linalg.as_hermitian(mat, tol=1e-8))
    if float(w[0]) < -FEASIBILITY_TOL:
        return None
    return clip_to_state(mat, tol=max(1e-9, -2.0 * float(w[0])))


def synthesize_exact_binary(p: BinaryDistribution, q: BinaryDistribution,
                            dst: Dichotomy) -> TestAndPrepareChannel:
    """Exact map from the classical binary pair (p, q) onto ``dst``.

    After relabeling so the accepted outcome is the likelier one under p, the
    two preparations are fixed by solving the pair of linear leg equations;
    the construction succeeds iff both solutions are positive semidefinite,
    which is the relative-majorization criterion for binary sources.
    """
    pa, qa = p.p, q.p
    effect_mat = np.diag([1.0, 0.0])
    if pa < qa:
        pa, qa = 1.0 - pa, 1.0 - qa
        effect_mat = np.diag([0.0, 1.0])
    rho2, sigma2 = dst.rho.mat, dst.sigma.mat

    if pa - qa <= FEASIBILITY_TOL:
        # indistinguishable source: only constant channels are available
        if float(np.max(np.abs(rho2 - sigma2))) <= 1e-9:
            prep = dst.rho
            return TestAndPrepareChannel(Effect(effect_mat), prep, prep)
        raise SynthesisRefusedError(
            "source outcomes are identically distributed but the target states differ")

    g1 = ((1.0 - qa) * rho2 - (1.0 - pa) * sigma2) / (pa - qa)
    g2 = (pa * sigma2 - qa * rho2) / (pa - qa)
    prep_accept = _prep_or_none(g1)
    prep_reject = _prep_or_none(g2)
    if prep_accept is None or prep_reject is None:
        lack = []
        if prep_accept is None:
            lack.append("the accept leg needs rho2 dominating (1-p)/(1-q)*sigma2")
        if prep_reject is None:
            lack.append("the reject leg needs p/q*sigma2 dominating rho2")
        raise SynthesisRefusedError(
            "binary source is not sufficient for the target: " + "; ".join(lack))
    return TestAndPrepareChannel(Effect(effect_mat), prep_accept, prep_reject)


def synthesize_exact(src: Dichotomy, dst: Dichotomy) -> TestAndPrepareChannel:
    """Exact test-and-prepare map sending ``src`` onto ``dst``, if one exists.

    Binary classical sources use the full binary criterion.  Otherwise the
    source is first reduced by a support test (project onto supp rho1, or onto
    the complement of supp sigma1), which succeeds precisely when the source's
    min-divergence dominates the target's max-divergence on the matching legs.
    """
    if src.dim == 2 and src.is_classical():
        return synthesize_exact_binary(
            BinaryDistribution(float(src.rho.diagonal()[0])),
            BinaryDistribution(float(src.sigma.diagonal()[0])),
            dst)

    attempts = []
    proj = linalg.support_projector(src.rho.mat)
    t = float(np.real(np.trace(proj @ src.sigma.mat)))
    channel = _support_route(proj, t, dst.rho, dst.sigma, accept_is_rho=True)
    if channel is not None:
        return channel
    attempts.append(
        f"rho-support route: min-divergence {divergences.d_min(src):.6g} bits vs "
        f"target max-divergence {divergences.d_max(dst):.6g} bits")

    proj_s = linalg.support_projector(src.sigma.mat)
    s = float(np.real(np.trace(proj_s @ src.rho.mat)))
    channel = _support_route(np.eye(src.dim) - proj_s, s, dst.sigma, dst.rho,
                             accept_is_rho=False)
    if channel is not None:
        return channel
    attempts.append(
        f"sigma-support route: min-divergence {divergences.d_min(src.swapped()):.6g} "
        f"bits vs swapped target max-divergence {divergences.d_max(dst.swapped()):.6g} bits")

    raise SynthesisRefusedError(
        "no exact test-and-prepare construction applies: " + "; ".join(attempts))


def _support_route(effect_mat: np.ndarray, leak: float, exact_leg: DensityMatrix,
                   mixed_leg: DensityMatrix,
                   accept_is_rho: bool) -> TestAndPrepareChannel | None:
    """Channel whose capturing outcome holds one source leg with certainty.

    That outcome prepares ``exact_leg``; the other source leg reaches it with
    probability ``leak``, so the complementary outcome must prepare
    (mixed_leg - leak * exact_leg) / (1 - leak), which exists iff mixed_leg
    dominates leak * exact_leg.  ``accept_is_rho`` states whether the capturing
    outcome is the accepting one.
    """
    if 1.0 - leak <= FEASIBILITY_TOL:
        if float(np.max(np.abs(exact_leg.mat - mixed_leg.mat))) <= 1e-9:
            return TestAndPrepareChannel(Effect(effect_mat), exact_leg, exact_leg)
        return None
    rest = (mixed_leg.mat - leak * exact_leg.mat) / (1.0 - leak)
    prep_rest = _prep_or_none(rest)
    if prep_rest is None:
        return None
    if accept_is_rho:
        return TestAndPrepareChannel(Effect(effect_mat), exact_leg, prep_rest)
    return TestAndPrepareChannel(Effect(effect_mat), prep_rest, exact_leg)


# ---------------------------------------------------------------------------
# approximate synthesis

@dataclass
class ApproxSynthesis:
    channel: TestAndPrepareChannel
    metric: Metric
    eps1: float
    eps2: float
    certified_rho_error: float
    dh_bits: float
    dmax_bits: float


def _dominated_blend(state: DensityMatrix, sigma: DensityMatrix,
                     s: float) -> DensityMatrix:
    """Nudge ``state`` toward ``sigma`` just enough that sigma - s*state >= 0.

    The accepted preparation must leave a positive remainder for the reject
    branch or the sigma leg cannot be reproduced exactly; solver slack can
    leave that remainder with an eigenvalue a few 1e-8 below zero.  The
    smallest eigenvalue of the affine pencil in the blend weight is concave,
    so the feasible weights form an interval ending at 1 and bisection finds
    its edge.
    """
    def min_eig(t: float) -> float:
        m = sigma.mat - s * ((1.0 - t) * state.mat + t * sigma.mat)
        return float(np.linalg.eigvalsh(linalg.as_hermitian(m, tol=1e-6))[0])

    if min_eig(0.0) >= 0.0:
        return state
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if min_eig(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    blended = (1.0 - hi) * state.mat + hi * sigma.mat
    return clip_to_state(blended, tol=1e-9)


def synthesize_approx(src: Dichotomy, dst: Dichotomy, eps1: float, eps2: float,
                      metric: Metric = Metric.TRACE) -> ApproxSynthesis:
    """Channel mapping src onto dst exactly on the sigma leg and within a
    certified budget on the rho leg.

    The accept effect is the optimal discrimination test on the source at
    type-I budget eps1; the accepted preparation is the eps2-smoothed target.
    Requires the source's one-shot discrimination power to cover the smoothed
    target's max-divergence; otherwise a SynthesisRefusedError explains the gap.
    The certified rho-leg error is eps1 + eps2 for the trace metric and
    sqrt(eps1) + eps2 for the purified metric.
    """
    for name, val in (("eps1", eps1), ("eps2", eps2)):
        if not (0.0 < val < 1.0):
            raise ValidationError(f"{name} must lie in (0, 1), got {val}")
    test = hypothesis_testing(src, eps1)
    smooth = smooth_dmax(dst, eps2, metric)
    if test.value_bits < smooth.value_bits - 1e-8:
        raise SynthesisRefusedError(
            f"source supplies {test.value_bits:.9g} bits at budget eps1={eps1:.9g} "
            f"but the smoothed target needs {smooth.value_bits:.9g} bits")

    q = test.optimizer
    rho_tilde = smooth.smoothed_state
    s = float(np.real(np.trace(q.mat @ src.sigma.mat)))
    if 1.0 - s <= 1e-12:
        prep_reject = dst.sigma
    else:
        rho_tilde = _dominated_blend(rho_tilde, dst.sigma, s)
        rest = (dst.sigma.mat - s * rho_tilde.mat) / (1.0 - s)
        prep_reject = clip_to_state(rest, tol=1e-7)
    channel = TestAndPrepareChannel(q, rho_tilde, prep_reject)
    certified = (eps1 + eps2) if metric is Metric.TRACE else (math.sqrt(eps1) + eps2)
    return ApproxSynthesis(channel, metric, eps1, eps2, certified,
                           test.value_bits, smooth.value_bits)


@dataclass
class VerificationReport:
    rho_error: float
    sigma_error: float
    metric: Metric


def verify_transformation(channel, src: Dichotomy, dst: Dichotomy,
                          metric: Metric = Metric.TRACE) -> VerificationReport:
    """Measured per-leg deviation of channel(src) from dst under ``metric``."""
    out_rho = channel.apply_state(src.rho)
    out_sigma = channel.apply_state(src.sigma)
    return VerificationReport(metric.distance(out_rho, dst.rho),
                              metric.distance(out_sigma, dst.sigma), metric)


# ---------------------------------------------------------------------------
# random channels and JSON I/O

def random_channel(d_in: int, d_out: int | None = None, env_dim: int | None = None,
                   seed: int = 0) -> GeneralChannel:
    """Seeded Haar-like channel from a random isometry into system + environment."""
    d_out = d_in if d_out is None else int(d_out)
    if env_dim is None:
        env_dim = max(1, math.ceil(d_in / d_out)) * 2
    if d_out * env_dim < d_in:
        raise ValidationError(
            f"need d_out * env_dim >= d_in, got {d_out}*{env_dim} < {d_in}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(d_out * env_dim, d_in)) + 1j * rng.normal(
        size=(d_out * env_dim, d_in))
    v, _ = np.linalg.qr(g)
    kraus = [v[e * d_out:(e + 1) * d_out, :] for e in range(env_dim)]
    return GeneralChannel(tuple(kraus))


def channel_to_json(channel) -> dict:
    if isinstance(channel, TestAndPrepareChannel):
        return {
            "effect": matrix_to_json(channel.effect.mat),
            "prep_accept": state_to_json(channel.prep_accept),
            "prep_reject": state_to_json(channel.prep_reject),
        }
    if isinstance(channel, GeneralChannel):
        return {"kraus": [matrix_to_json(k) for k in channel.kraus]}
    raise ValidationError(f"cannot serialize channel of type {type(channel).__name__}")


def channel_from_json(obj):
    if not isinstance(obj, dict):
        raise ValidationError("channel JSON must be an object")
    if "kraus" in obj:
        return GeneralChannel(tuple(matrix_from_json(k) for k in obj["kraus"]))
    required = {"effect", "prep_accept", "prep_reject"}
    if not required.issubset(obj):
        raise ValidationError(
            'channel JSON needs either "kraus" or the keys '
            '"effect", "prep_accept", "prep_reject"')
    return TestAndPrepareChannel(
        Effect(matrix_from_json(obj["effect"])),
        state_from_json(obj["prep_accept"]),
        state_from_json(obj["prep_reject"]))
