"""Asymptotic divergences between the two arms of a dichotomy.

Everything is reported in bits (base-2 logarithms).  Values can be ``math.inf``
when the support condition fails; infinities are always explicit IEEE
infinities, never large finite sentinels.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg
from .states import Dichotomy, ValidationError

#: mass of rho tolerated outside the support of sigma before the value is +inf
SUPPORT_LEAK_TOL = 1e-10

_LOG2 = math.log(2.0)


def _support_leak(d: Dichotomy) -> float:
    """Weight of rho outside the support of sigma."""
    proj = linalg.support_projector(d.sigma.mat)
    leak = float(np.real(np.trace(d.rho.mat))) - float(np.real(np.trace(proj @ d.rho.mat)))
    return max(leak, 0.0)


def _dominated(d: Dichotomy) -> bool:
    return _support_leak(d) <= SUPPORT_LEAK_TOL


def _log2_support(a: np.ndarray) -> np.ndarray:
    return linalg.matrix_function(a, np.log2, support_only=True)


def relative_entropy(d: Dichotomy) -> float:
    """Umegaki relative entropy D(rho||sigma) in bits; +inf if unsupported."""
    if not _dominated(d):
        return math.inf
    rho = d.rho.mat
    x = _log2_support(rho) - _log2_support(d.sigma.mat)
    return float(np.real(np.trace(rho @ x)))


def relative_entropy_variance(d: Dichotomy) -> float:
    """Variance of the log-likelihood ratio under rho, in bits squared."""
    if not _dominated(d):
        raise ValidationError("relative entropy variance needs supp(rho) within supp(sigma)")
    rho = d.rho.mat
    x = _log2_support(rho) - _log2_support(d.sigma.mat)
    mean = float(np.real(np.trace(rho @ x)))
    second = float(np.real(np.trace(x @ rho @ x)))
    return max(second - mean ** 2, 0.0)


def petz_renyi(d: Dichotomy, alpha: float) -> float:
    """Petz-Renyi divergence of order alpha in (0,1) or (1,2], in bits."""
    alpha = float(alpha)
    if not (0.0 < alpha <= 2.0) or alpha == 1.0:
        raise ValidationError(f"Petz order must lie in (0,1) or (1,2], got {alpha}")
    if alpha > 1.0 and not _dominated(d):
        return math.inf
    rho_a = linalg.matrix_function(d.rho.mat, lambda w: np.maximum(w, 0.0) ** alpha)
    sig_b = linalg.matrix_function(
        d.sigma.mat, lambda w: w ** (1.0 - alpha), support_only=True)
    t = float(np.real(np.trace(rho_a @ sig_b)))
    if t <= 0.0:
        # orthogonal supports; only reachable for alpha < 1
        return math.inf
    return math.log2(t) / (alpha - 1.0)


def sandwiched_renyi(d: Dichotomy, alpha: float) -> float:
    """Sandwiched Renyi divergence of order alpha in [1/2,1) or (1,inf], in bits.

    alpha = inf is the max-divergence; alpha = 1/2 equals -log2 of the fidelity.
    """
    alpha = float(alpha)
    if math.isinf(alpha):
        return d_max(d)
    if not (0.5 <= alpha) or alpha == 1.0:
        raise ValidationError(f"sandwiched order must lie in [1/2,1) or (1,inf], got {alpha}")
    if alpha > 1.0 and not _dominated(d):
        return math.inf
    e = (1.0 - alpha) / (2.0 * alpha)
    s = linalg.matrix_function(d.sigma.mat, lambda w: w ** e, support_only=True)
    m = s @ d.rho.mat @ s
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    t = float(np.sum(np.maximum(w, 0.0) ** alpha))
    if t <= 0.0:
        return math.inf
    return math.log2(t) / (alpha - 1.0)


def d_min(d: Dichotomy) -> float:
    """-log2 of sigma's weight on the support of rho (min-divergence)."""
    proj = linalg.support_projector(d.rho.mat)
    t = float(np.real(np.trace(d.sigma.mat @ proj)))
    if t <= 0.0:
        return math.inf
    if t >= 1.0:
        return 0.0
    return -math.log2(t)


def d_max(d: Dichotomy) -> float:
    """log2 of the smallest lambda with rho <= lambda * sigma (max-divergence)."""
    if not _dominated(d):
        return math.inf
    s = linalg.matrix_function(d.sigma.mat, lambda w: w ** -0.5, support_only=True)
    m = s @ d.rho.mat @ s
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    lam = float(w[-1])
    if lam <= 0.0:
        return -math.inf
    return math.log2(lam)
