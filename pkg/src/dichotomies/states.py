"""Density matrices, dichotomies (state pairs), distance metrics and JSON I/O."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg

#: default ceiling on the dimension produced by tensor powers
DEFAULT_DIM_CAP = 4096

#: tolerance used when validating states (trace and positivity)
STATE_TOL = 1e-10


class ValidationError(ValueError):
    """Raised when an input fails structural validation."""


def _validated_state_matrix(mat: np.ndarray) -> np.ndarray:
    try:
        h = linalg.as_hermitian(mat)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    tr = float(np.real(np.trace(h)))
    if abs(tr - 1.0) > STATE_TOL:
        raise ValidationError(f"state trace is {tr!r}, expected 1 within {STATE_TOL}")
    w = np.linalg.eigvalsh(h)
    if float(w[0]) < -STATE_TOL:
        raise ValidationError(f"state has negative eigenvalue {float(w[0]):.3e}")
    h.flags.writeable = False
    return h


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix (Hermitian, PSD, unit trace)."""

    mat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mat", _validated_state_matrix(self.mat))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return linalg.eigh(self.mat).eigenvalues

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.mat)).copy()

    def is_diagonal(self, tol: float = 1e-13) -> bool:
        off = self.mat - np.diag(np.diag(self.mat))
        return float(np.max(np.abs(off), initial=0.0)) <= tol


@dataclass(frozen=True, eq=False)
class Dichotomy:
    """An ordered pair of states (rho, sigma) on the same space."""

    rho: DensityMatrix
    sigma: DensityMatrix

    def __post_init__(self):
        if self.rho.dim != self.sigma.dim:
            raise ValidationError(
                f"dichotomy dimensions differ: {self.rho.dim} vs {self.sigma.dim}")

    @property
    def dim(self) -> int:
        return self.rho.dim

    def swapped(self) -> "Dichotomy":
        return Dichotomy(self.sigma, self.rho)

    def is_classical(self, tol: float = 1e-13) -> bool:
        return self.rho.is_diagonal(tol) and self.sigma.is_diagonal(tol)


@dataclass(frozen=True)
class BinaryDistribution:
    """A distribution (p, 1-p) on two outcomes."""

    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValidationError(f"binary probability {self.p!r} outside [0, 1]")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.p, 1.0 - self.p])


class Metric(enum.Enum):
    """Distance used for smoothing balls and error reporting."""

    TRACE = "trace"
    PURIFIED = "purified"

    def distance(self, a: DensityMatrix, b: DensityMatrix) -> float:
        if self is Metric.TRACE:
            return trace_distance(a, b)
        return purified_distance(a, b)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """T(a, b) = half the trace norm of a - b."""
    w = np.linalg.eigvalsh(a.mat - b.mat)
    return float(np.sum(np.abs(w)) / 2)


def fidelity(a: DensityMatrix, b: DensityMatrix) -> float:
    """Squared-trace-norm fidelity, 1 iff the states coincide."""
    root_a = linalg.matrix_function(a.mat, lambda w: np.sqrt(np.maximum(w, 0.0)))
    m = root_a @ b.mat @ root_a
    w = np.linalg.eigvalsh((m + m.conj().T) / 2)
    f = float(np.sum(np.sqrt(np.maximum(w, 0.0))) ** 2)
    return min(max(f, 0.0), 1.0)


def _purified_local(diff: np.ndarray, mid: np.ndarray) -> float:
    """Second-order purified distance for a tiny perturbation around ``mid``.

    1 - F is a difference of order-one quantities, so evaluating it directly
    floors near sqrt(machine epsilon) even for numerically identical states.
    For deviations far below the spectrum the quadratic (Bures) form in the
    midpoint eigenbasis is exact to third order and has no cancellation.
    """
    w, v = np.linalg.eigh((mid + mid.conj().T) / 2)
    d = v.conj().T @ diff @ v
    denom = w[:, None] + w[None, :]
    num = np.abs(d) ** 2
    mask = denom > 0.0
    q = float(np.sum(num[mask] / denom[mask]) / 2.0)
    return float(np.sqrt(max(q, 0.0)))


def purified_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    """P(a, b) = sqrt(1 - F(a, b)); upper-bounds the trace distance."""
    diff = a.mat - b.mat
    scale = float(np.max(np.abs(diff)))
    mid = (a.mat + b.mat) / 2
    lam_min = float(np.linalg.eigvalsh((mid + mid.conj().T) / 2)[0])
    if scale <= 1e-10 and scale <= 1e-3 * max(lam_min, 0.0):
        return _purified_local(diff, mid)
    return float(np.sqrt(max(0.0, 1.0 - fidelity(a, b))))


def _resolved_cap(cap: int | None) -> int:
    return DEFAULT_DIM_CAP if cap is None else int(cap)


def tensor_power(x: DensityMatrix | Dichotomy, n: int, cap: int | None = None):
    """n-fold tensor power of a state or dichotomy, guarded by a dimension cap."""
    if n < 1:
        raise ValidationError(f"tensor power needs n >= 1, got {n}")
    if isinstance(x, Dichotomy):
        return Dichotomy(tensor_power(x.rho, n, cap), tensor_power(x.sigma, n, cap))
    dim = x.dim ** n
    limit = _resolved_cap(cap)
    if dim > limit:
        raise ValidationError(f"tensor power dimension {dim} exceeds cap {limit}")
    out = x.mat
    for _ in range(n - 1):
        out = np.kron(out, x.mat)
    return DensityMatrix(out)


def random_density(dim: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    """Seeded random state: partial trace of a Haar-like pure state on dim x rank."""
    if dim < 1:
        raise ValidationError(f"dimension must be positive, got {dim}")
    rank = dim if rank is None else rank
    if not (1 <= rank <= dim):
        raise ValidationError(f"rank {rank} outside 1..{dim}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.real(np.trace(m)))


def classical_embed(weights: Sequence[float] | np.ndarray) -> DensityMatrix:
    """Embed a probability vector as a diagonal density matrix."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValidationError("probability vector must be a nonempty 1-d array")
    if np.any(w < -STATE_TOL):
        raise ValidationError(f"negative probability {float(np.min(w)):.3e}")
    if abs(float(np.sum(w)) - 1.0) > STATE_TOL:
        raise ValidationError(f"probabilities sum to {float(np.sum(w))!r}, expected 1")
    return DensityMatrix(np.diag(np.maximum(w, 0.0) / np.sum(np.maximum(w, 0.0))))


def classical_dichotomy(p: Sequence[float], q: Sequence[float]) -> Dichotomy:
    """Embed two probability vectors of equal length as a diagonal dichotomy."""
    return Dichotomy(classical_embed(p), classical_embed(q))


def clip_to_state(mat: np.ndarray, tol: float = 1e-9) -> DensityMatrix:
    """Project a numerically dusty matrix onto the state set.

    Negative eigenvalues no smaller than ``-tol`` are zeroed and the trace is
    renormalized; larger violations are rejected.  Used for internally
    synthesized preparations, never for user input.
    """
    w, v = linalg.eigh(mat)
    if float(w[0]) < -tol:
        raise ValidationError(f"matrix is not PSD within {tol}: eigenvalue {float(w[0]):.3e}")
    w = np.maximum(w, 0.0)
    total = float(np.sum(w))
    if total <= 0.0:
        raise ValidationError("matrix has no positive spectrum")
    out = (v * (w / total)) @ v.conj().T
    return DensityMatrix(out)


# ---------------------------------------------------------------------------
# JSON wire format: a matrix is a list of rows, each entry either a real
# number or a two-element [re, im] pair; a dichotomy is {"rho": M, "sigma": M}.

def matrix_to_json(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in a]


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ValidationError("matrix JSON must be a nonempty list of rows")
    rows = []
    for row in obj:
        if not isinstance(row, list):
            raise ValidationError("matrix JSON rows must be lists")
        entries = []
        for x in row:
            if isinstance(x, (int, float)):
                entries.append(complex(x))
            elif isinstance(x, list) and len(x) == 2 and all(
                    isinstance(t, (int, float)) for t in x):
                entries.append(complex(x[0], x[1]))
            else:
                raise ValidationError(f"bad matrix entry {x!r}: expected number or [re, im]")
        rows.append(entries)
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix JSON rows have inconsistent lengths")
    return np.array(rows, dtype=complex)


def state_to_json(dm: DensityMatrix) -> list:
    return matrix_to_json(dm.mat)


def state_from_json(obj) -> DensityMatrix:
    return DensityMatrix(matrix_from_json(obj))


def dichotomy_to_json(d: Dichotomy) -> dict:
    return {"rho": state_to_json(d.rho), "sigma": state_to_json(d.sigma)}


def dichotomy_from_json(obj) -> Dichotomy:
    if not isinstance(obj, dict) or "rho" not in obj or "sigma" not in obj:
        raise ValidationError('dichotomy JSON must contain "rho" and "sigma"')
    return Dichotomy(state_from_json(obj["rho"]), state_from_json(obj["sigma"]))
