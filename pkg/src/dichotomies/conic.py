"""Small dense semidefinite programs in standard primal form.

A problem is

    minimize    sum_i tr(C_i X_i)
    subject to  sum_i tr(A_ji X_i) = b_j   for each constraint j,
                X_i PSD Hermitian blocks.

Problems are solved with a primal-dual interior-point method (cvxopt's conelp,
Nesterov-Todd scaled search direction, homogeneous self-dual embedding for
infeasibility detection).  Complex Hermitian blocks are handled through the
real-symmetric doubling embedding  X = R + iS  ->  [[R, -S], [S, R]]  with
coefficient matrices halved so that traces are preserved; a feasible real
point is mapped back by averaging, which preserves objective and constraint
values exactly, so the two problems have identical optima.

Intended for desk-scale instances: total block dimension is capped at 256 and
the iteration cap is 200.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from cvxopt import matrix as cvxmatrix
from cvxopt import solvers

from . import linalg
from .states import ValidationError

#: ceiling on the summed dimension of all blocks
DIM_CAP = 256

#: interior-point iteration cap
MAX_ITERS = 200

# 1e-8 is the tightest target conelp certifies reliably in double precision;
# chasing 1e-9 makes it overshoot into numerical breakdown on hard instances
_SOLVER_OPTIONS = {
    "show_progress": False,
    "maxiters": MAX_ITERS,
    "abstol": 1e-8,
    "reltol": 1e-8,
    "feastol": 1e-8,
    "refinement": 2,
}

#: imaginary parts below this (relative) threshold let a block stay real
_REAL_TOL = 1e-14


class SdpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITER_LIMIT = "iteration_limit"


@dataclass
class SdpProblem:
    """Standard-form SDP data; one objective matrix and one matrix per
    constraint for every block (zero matrices where a block does not appear)."""

    block_dims: list[int]
    objective: list[np.ndarray]
    constraints: list[tuple[list[np.ndarray], float]]

    def normalized(self) -> "SdpProblem":
        dims = [int(n) for n in self.block_dims]
        if not dims or any(n < 1 for n in dims):
            raise ValidationError(f"invalid block dimensions {dims}")
        if sum(dims) > DIM_CAP:
            raise ValidationError(
                f"total block dimension {sum(dims)} exceeds cap {DIM_CAP}")
        if len(self.objective) != len(dims):
            raise ValidationError("objective must provide one matrix per block")
        obj = [_coerce(c, n) for c, n in zip(self.objective, dims)]
        cons = []
        for mats, rhs in self.constraints:
            if len(mats) != len(dims):
                raise ValidationError("each constraint must provide one matrix per block")
            cons.append(([_coerce(a, n) for a, n in zip(mats, dims)], float(rhs)))
        return SdpProblem(dims, obj, cons)


@dataclass
class SdpSolution:
    status: SdpStatus
    primal_blocks: list[np.ndarray] = field(default_factory=list)
    dual_vector: np.ndarray | None = None
    primal_value: float = float("nan")
    dual_value: float = float("nan")
    gap: float = float("nan")
    residual: float = float("nan")
    min_eigenvalue: float = float("nan")
    iterations: int = 0


def _coerce(a: np.ndarray, n: int) -> np.ndarray:
    h = linalg.as_hermitian(a)
    if h.shape[0] != n:
        raise ValidationError(f"matrix shape {h.shape} does not match block dim {n}")
    return h


def _is_real(a: np.ndarray) -> bool:
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    return float(np.max(np.abs(a.imag), initial=0.0)) <= _REAL_TOL * scale


def _embed(a: np.ndarray) -> np.ndarray:
    """Real-symmetric doubling of a complex Hermitian matrix."""
    r, s = a.real, a.imag
    return np.block([[r, -s], [s, r]])


def _unembed(y: np.ndarray) -> np.ndarray:
    """Average a real-symmetric 2n x 2n point back to a complex Hermitian one."""
    n = y.shape[0] // 2
    r = (y[:n, :n] + y[n:, n:]) / 2
    s = (y[n:, :n] - y[:n, n:]) / 2
    return (r + r.T) / 2 + 1j * (s - s.T) / 2


@lru_cache(maxsize=None)
def _sym_indices(n: int):
    diag = (np.arange(n), np.arange(n))
    triu = np.triu_indices(n, k=1)
    return diag, triu


def _svec(a: np.ndarray) -> np.ndarray:
    """Coordinates of a real symmetric matrix in the orthonormal basis
    (diagonal units, then sqrt(2)-scaled off-diagonal units)."""
    diag, triu = _sym_indices(a.shape[0])
    return np.concatenate([a[diag], np.sqrt(2.0) * a[triu]])


@lru_cache(maxsize=None)
def _basis_columns(n: int) -> np.ndarray:
    """Column-stacked vectorizations of the orthonormal symmetric basis."""
    diag, triu = _sym_indices(n)
    k = n * (n + 1) // 2
    cols = np.zeros((n * n, k))
    for idx in range(n):
        e = np.zeros((n, n))
        e[idx, idx] = 1.0
        cols[:, idx] = e.flatten(order="F")
    for j, (r, ccol) in enumerate(zip(*triu)):
        e = np.zeros((n, n))
        e[r, ccol] = e[ccol, r] = 1.0 / np.sqrt(2.0)
        cols[:, n + j] = e.flatten(order="F")
    return cols


def _smat(x: np.ndarray, n: int) -> np.ndarray:
    diag, triu = _sym_indices(n)
    out = np.zeros((n, n))
    out[diag] = x[:n]
    out[triu] = x[n:] / np.sqrt(2.0)
    out[(triu[1], triu[0])] = x[n:] / np.sqrt(2.0)
    return out


def solve(problem: SdpProblem) -> SdpSolution:
    """Solve the SDP deterministically and return certified primal/dual data."""
    prob = problem.normalized()
    nblocks = len(prob.block_dims)

    # decide per block whether the real path suffices
    real_block = []
    for i in range(nblocks):
        mats = [prob.objective[i]] + [mats_i[i] for mats_i, _ in prob.constraints]
        real_block.append(all(_is_real(a) for a in mats))

    solve_dims = []  # dimension actually handed to the solver per block
    coeff = []       # per block: function mapping our matrix -> real coefficient matrix
    for i, n in enumerate(prob.block_dims):
        if real_block[i]:
            solve_dims.append(n)
            coeff.append(lambda a: a.real)
        else:
            solve_dims.append(2 * n)
            coeff.append(lambda a: _embed(a) / 2.0)

    offsets = np.cumsum([0] + [n * (n + 1) // 2 for n in solve_dims])
    nvar = int(offsets[-1])
    mcon = len(prob.constraints)

    c = np.zeros(nvar)
    for i in range(nblocks):
        c[offsets[i]:offsets[i + 1]] = _svec(coeff[i](prob.objective[i]))

    a_rows = np.zeros((mcon, nvar))
    b = np.zeros(mcon)
    for j, (mats, rhs) in enumerate(prob.constraints):
        for i in range(nblocks):
            a_rows[j, offsets[i]:offsets[i + 1]] = _svec(coeff[i](mats[i]))
        b[j] = rhs

    # drop dependent equality rows (deterministically) after a consistency check
    keep = _independent_rows(a_rows)
    if len(keep) < mcon:
        x_ls, res, *_ = np.linalg.lstsq(a_rows, b, rcond=None)
        residual = float(np.linalg.norm(a_rows @ x_ls - b))
        if residual > 1e-9 * max(1.0, float(np.linalg.norm(b))):
            return SdpSolution(status=SdpStatus.INFEASIBLE)
        a_rows, b = a_rows[keep], b[keep]

    g_cols = np.zeros((sum(n * n for n in solve_dims), nvar))
    row0 = 0
    for i, n in enumerate(solve_dims):
        g_cols[row0:row0 + n * n, offsets[i]:offsets[i + 1]] = -_basis_columns(n)
        row0 += n * n

    dims = {"l": 0, "q": [], "s": list(solve_dims)}
    try:
        sol = solvers.conelp(
            cvxmatrix(c), cvxmatrix(g_cols), cvxmatrix(np.zeros(g_cols.shape[0])),
            dims, cvxmatrix(a_rows), cvxmatrix(b), options=_SOLVER_OPTIONS)
    except (ZeroDivisionError, ArithmeticError, ValueError):
        # cvxopt surfaces central-path breakdowns on degenerate instances as
        # raw arithmetic errors; report them as a non-converged solve
        return SdpSolution(status=SdpStatus.ITER_LIMIT)

    status = {
        "optimal": SdpStatus.OPTIMAL,
        "primal infeasible": SdpStatus.INFEASIBLE,
        "dual infeasible": SdpStatus.UNBOUNDED,
        "unknown": SdpStatus.ITER_LIMIT,
    }[sol["status"]]
    out = SdpSolution(status=status, iterations=int(sol.get("iterations", 0)))
    if status in (SdpStatus.INFEASIBLE, SdpStatus.UNBOUNDED):
        return out

    x = np.array(sol["x"]).ravel()
    blocks = []
    min_eig = np.inf
    for i, n in enumerate(prob.block_dims):
        y = _smat(x[offsets[i]:offsets[i + 1]], solve_dims[i])
        block = y if real_block[i] else _unembed(y)
        blocks.append((block + block.conj().T) / 2)
        min_eig = min(min_eig, float(np.linalg.eigvalsh(blocks[-1])[0]))

    y_dual = -np.array(sol["y"]).ravel() if mcon else np.zeros(0)
    # re-inflate dropped rows with zeros so the caller sees one value per constraint
    if len(keep) < mcon:
        full = np.zeros(mcon)
        full[np.array(keep, dtype=int)] = y_dual
        y_dual = full

    primal = float(np.dot(c, x))
    dual = float(np.dot(b, np.array(sol["y"]).ravel())) * -1.0 if len(b) else 0.0
    residual = float(np.max(np.abs(a_rows @ x - b), initial=0.0))
    out.primal_blocks = blocks
    out.dual_vector = y_dual
    out.primal_value = primal
    out.dual_value = dual
    out.gap = float(sol["gap"])
    out.residual = residual
    out.min_eigenvalue = float(min_eig)
    return out


def _independent_rows(a: np.ndarray) -> list[int]:
    """Indices of a maximal independent row subset, chosen deterministically."""
    m = a.shape[0]
    if m == 0:
        return []
    rank = np.linalg.matrix_rank(a)
    if rank == m:
        return list(range(m))
    keep: list[int] = []
    basis = np.zeros((0, a.shape[1]))
    for j in range(m):
        candidate = np.vstack([basis, a[j]])
        if np.linalg.matrix_rank(candidate) > basis.shape[0]:
            keep.append(j)
            basis = candidate
        if len(keep) == rank:
            break
    return keep
