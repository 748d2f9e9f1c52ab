"""Dense Hermitian linear algebra helpers shared by every other module.

All spectral computations in the package funnel through :func:`eigh` so that
support cutoffs and symmetrization are applied consistently.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

#: eigenvalues with magnitude below this fraction of the largest one are
#: treated as exact zeros (kernel directions)
SUPPORT_CUTOFF = 1e-12

#: allowed relative deviation from exact Hermitian symmetry
HERMITIAN_TOL = 1e-12


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # columns, orthonormal


def as_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian, return its symmetrized copy.

    Deviations up to ``tol`` (relative to the largest entry) are repaired by
    averaging with the conjugate transpose; anything larger is rejected.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 0.0)
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    return (a + a.conj().T) / 2


def eigh(a: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    h = as_hermitian(a)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        res = float(np.linalg.norm(h))
        raise ValueError(f"eigensolver did not converge (input norm {res:.3e})") from exc
    return EigenDecomposition(w.astype(float), v)


def _zero_cutoff(w: np.ndarray) -> float:
    return SUPPORT_CUTOFF * max(float(np.max(np.abs(w), initial=0.0)), np.finfo(float).tiny)


def matrix_function(a: np.ndarray, f: Callable[[np.ndarray], np.ndarray],
                    support_only: bool = False) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Eigenvalues within the support cutoff of zero are treated as exact zeros;
    with ``support_only=True`` they are mapped to 0 instead of ``f(0)``, which
    gives the support-restricted functional calculus used for ``log`` and
    negative powers.
    """
    w, v = eigh(a)
    cutoff = _zero_cutoff(w)
    kept = np.abs(w) > cutoff
    w_eff = np.where(kept, w, 0.0)
    fw = np.zeros_like(w_eff)
    with np.errstate(all="ignore"):
        if support_only:
            if np.any(kept):
                fw[kept] = np.asarray(f(w_eff[kept]), dtype=float)
        else:
            fw = np.asarray(f(w_eff), dtype=float)
    bad = ~np.isfinite(fw)
    if np.any(bad):
        raise ValueError(f"matrix function undefined at eigenvalue {w_eff[bad][0]:.6e}")
    out = (v * fw) @ v.conj().T
    return (out + out.conj().T) / 2


def support_projector(a: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the range of a PSD matrix."""
    w, v = eigh(a)
    cutoff = _zero_cutoff(w)
    if float(w[0]) < -1e-10 * max(1.0, float(np.max(np.abs(w), initial=0.0))):
        raise ValueError(f"support_projector expects a PSD matrix, min eigenvalue {w[0]:.3e}")
    mask = (w > cutoff).astype(float)
    p = (v * mask) @ v.conj().T
    return (p + p.conj().T) / 2


def positive_part_trace(a: np.ndarray) -> float:
    """Trace of the positive part: sum of max(eigenvalue, 0)."""
    w, _ = eigh(a)
    return float(np.sum(np.maximum(w, 0.0)))


def positive_part(a: np.ndarray) -> np.ndarray:
    """Positive part of a Hermitian matrix (negative eigenvalues zeroed)."""
    return matrix_function(a, lambda w: np.maximum(w, 0.0))
