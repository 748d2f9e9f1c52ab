"""Many-copy conversion experiments: achievable rates and error exponents.

Here a "conversion" sends n copies of a source dichotomy to m copies of a
target dichotomy with an error budget split between the two legs: the test
side gets eps1, the preparation side gets eps2, and the transformation is
certified feasible when the source's hypothesis-testing divergence at budget
eps1 covers the target's smoothed max-divergence at budget eps2.

For binary classical dichotomies everything runs on binomial likelihood-ratio
classes in log space, so block lengths in the thousands and error levels down
to 2^-900 are exact; matrix inputs run through the eigendecomposition / SDP
machinery and are bounded by a dimension cap.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlogy

from . import divergences
from .channels import synthesize_approx, verify_transformation
from .oneshot import (classical_dh_from_logs, classical_dmax_t_from_logs,
                      hypothesis_testing, smooth_dmax)
from .states import (Dichotomy, Metric, ValidationError, tensor_power,
                     trace_distance)

_LOG2 = math.log(2.0)

#: two-sided relative width of the refusal band around the critical rate
NEAR_CRITICAL_BAND = 0.02

#: floor (in log2) below which error probabilities are not resolved further
LOG2_FLOOR = -900.0

#: feasibility comparisons allow this much slack in bits
FEASIBILITY_SLACK = 1e-9


class NearCriticalError(RuntimeError):
    """The requested rate is too close to the critical rate to classify."""

    def __init__(self, rate: float, critical: float):
        super().__init__(
            f"rate {rate:.9g} lies within {NEAR_CRITICAL_BAND:.0%} of the critical "
            f"rate {critical:.9g}; the asymptotic regime is ambiguous there")
        self.rate = rate
        self.critical = critical


@dataclass
class ExperimentConfig:
    """Shared knobs for the many-copy experiments."""

    src: Dichotomy
    dst: Dichotomy
    eps_total: float = 0.05
    eps_split: float = 0.5
    metric: Metric = Metric.TRACE
    n_min: int = 1
    n_max: int = 64
    points: int = 24
    use_fast_path: bool = True
    dim_cap: int | None = None
    verify_dim_cap: int = 16

    def __post_init__(self):
        if not (0.0 < self.eps_total < 1.0):
            raise ValidationError(f"eps_total must lie in (0, 1), got {self.eps_total}")
        if not (0.0 < self.eps_split < 1.0):
            raise ValidationError(f"eps_split must lie in (0, 1), got {self.eps_split}")
        if not (1 <= self.n_min <= self.n_max):
            raise ValidationError(
                f"need 1 <= n_min <= n_max, got {self.n_min}..{self.n_max}")


@dataclass
class ExperimentRecord:
    n: int
    m: float
    rate: float
    eps1: float
    eps2: float
    achieved_error: float
    certified: float
    dh_bits: float
    dmax_bits: float


CSV_COLUMNS = ("n", "m", "rate", "eps1", "eps2", "achieved_error", "certified",
               "dh_bits", "dmax_bits")


def records_to_csv(records) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        row = [f"{getattr(r, c):.9g}" if c != "n" else str(r.n) for c in CSV_COLUMNS]
        out.write(",".join(row) + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# binomial class reduction for binary classical dichotomies

def _is_binary_classical(d: Dichotomy) -> bool:
    return d.dim == 2 and d.is_classical()

def _binary_class_logs(weight: float, n: int) -> np.ndarray:
    """Log-masses of the n+1 likelihood-ratio classes of (w, 1-w)^(x n)."""
    k = np.arange(n + 1, dtype=float)
    choose = gammaln(n + 1.0) - gammaln(k + 1.0) - gammaln(n - k + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mass = choose + xlogy(k, weight) + xlogy(n - k, 1.0 - weight)
    return np.where(np.isnan(mass), -math.inf, mass)


def _class_pair(d: Dichotomy, n: int) -> tuple[np.ndarray, np.ndarray]:
    p0 = float(d.rho.diagonal()[0])
    q0 = float(d.sigma.diagonal()[0])
    return _binary_class_logs(p0, n), _binary_class_logs(q0, n)


def _dh_bits(src: Dichotomy, n: int, *, log2_exclude: float | None = None,
             log2_include: float | None = None, fast: bool = True,
             dim_cap: int | None = None) -> float:
    """Hypothesis-testing bits supplied by n copies of the source."""
    if fast and _is_binary_classical(src):
        lp, lq = _class_pair(src, n)
        if log2_exclude is not None:
            value, _ = classical_dh_from_logs(lp, lq, log_exclude=log2_exclude * _LOG2)
        else:
            value, _ = classical_dh_from_logs(lp, lq, log_include=log2_include * _LOG2)
        return value
    if log2_exclude is None:
        eps = 1.0 - 2.0 ** log2_include
        if not (0.0 < eps < 1.0):
            raise ValidationError(
                "matrix-path experiments cannot resolve budgets this close to one; "
                "use a binary classical dichotomy for exponent sweeps")
    else:
        eps = 2.0 ** log2_exclude
        if eps <= 0.0:
            raise ValidationError(
                "matrix-path experiments cannot resolve budgets this small; "
                "use a binary classical dichotomy for exponent sweeps")
    return hypothesis_testing(tensor_power(src, n, cap=dim_cap), eps).value_bits


def _dmax_bits(dst: Dichotomy, m: int, *, log2_eps: float, metric: Metric,
               fast: bool = True, dim_cap: int | None = None) -> float:
    """Smoothed max-divergence bits demanded by m copies of the target."""
    if m == 0:
        return 0.0
    if fast and metric is Metric.TRACE and _is_binary_classical(dst):
        lp, lq = _class_pair(dst, m)
        value, _ = classical_dmax_t_from_logs(lp, lq, log2_eps * _LOG2)
        return value
    eps = 2.0 ** log2_eps
    if eps <= 0.0:
        raise ValidationError(
            "matrix-path experiments cannot resolve budgets this small; "
            "use a binary classical dichotomy for exponent sweeps")
    return smooth_dmax(tensor_power(dst, m, cap=dim_cap), eps, metric).value_bits


# ---------------------------------------------------------------------------
# achievable copy counts and rate curves

def achievable_m(src: Dichotomy, dst: Dichotomy, n: int, eps_total: float,
                 eps_split: float = 0.5, metric: Metric = Metric.TRACE,
                 use_fast_path: bool = True, dim_cap: int | None = None):
    """Largest target copy count certified reachable from n source copies.

    Returns math.inf when the target pair is trivial (rho = sigma), since a
    constant preparation then reproduces any number of copies exactly.
    """
    if n < 1:
        raise ValidationError(f"need n >= 1, got {n}")
    if not (0.0 < eps_total < 1.0) or not (0.0 < eps_split < 1.0):
        raise ValidationError("eps_total and eps_split must lie in (0, 1)")
    if trace_distance(dst.rho, dst.sigma) <= 1e-12:
        return math.inf
    eps1 = eps_split * eps_total
    eps2 = (1.0 - eps_split) * eps_total
    have = _dh_bits(src, n, log2_exclude=math.log2(eps1), fast=use_fast_path,
                    dim_cap=dim_cap)

    def feasible(m: int) -> bool:
        need = _dmax_bits(dst, m, log2_eps=math.log2(eps2), metric=metric,
                          fast=use_fast_path, dim_cap=dim_cap)
        return have >= need - FEASIBILITY_SLACK

    if not feasible(1):
        return 0
    lo = 1
    hi = 2
    while True:
        try:
            ok = feasible(hi)
        except ValidationError as exc:
            raise ValidationError(
                f"achievable copy count exceeds the evaluation cap at m={hi}: {exc}"
            ) from exc
        if not ok:
            break
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _schedule(n_min: int, n_max: int, points: int) -> list[int]:
    if n_max - n_min + 1 <= points:
        return list(range(n_min, n_max + 1))
    grid = np.unique(np.round(np.geomspace(n_min, n_max, points)).astype(int))
    return [int(v) for v in grid]


def rate_curve(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """Certified conversion rate m/n over a geometric schedule of block sizes.

    When both tensor powers stay small enough, the certified channel is
    actually synthesized and measured, filling ``achieved_error``; otherwise
    that column is NaN and only the certified bound applies.
    """
    eps1 = cfg.eps_split * cfg.eps_total
    eps2 = (1.0 - cfg.eps_split) * cfg.eps_total
    records = []
    for n in _schedule(cfg.n_min, cfg.n_max, cfg.points):
        m = achievable_m(cfg.src, cfg.dst, n, cfg.eps_total, cfg.eps_split,
                         cfg.metric, cfg.use_fast_path, cfg.dim_cap)
        certified = (eps1 + eps2 if cfg.metric is Metric.TRACE
                     else math.sqrt(eps1) + eps2)
        dh = _dh_bits(cfg.src, n, log2_exclude=math.log2(eps1),
                      fast=cfg.use_fast_path, dim_cap=cfg.dim_cap)
        dmax = (_dmax_bits(cfg.dst, int(m), log2_eps=math.log2(eps2),
                           metric=cfg.metric, fast=cfg.use_fast_path,
                           dim_cap=cfg.dim_cap)
                if m not in (0, math.inf) else 0.0)
        achieved = math.nan
        if (isinstance(m, int) and m >= 1
                and cfg.src.dim ** n <= cfg.verify_dim_cap
                and cfg.dst.dim ** m <= cfg.verify_dim_cap):
            big_src = tensor_power(cfg.src, n)
            big_dst = tensor_power(cfg.dst, m)
            try:
                syn = synthesize_approx(big_src, big_dst, eps1, eps2, cfg.metric)
                achieved = verify_transformation(
                    syn.channel, big_src, big_dst, cfg.metric).rho_error
            except ValidationError:
                pass
        records.append(ExperimentRecord(
            n=n, m=float(m), rate=float(m) / n, eps1=eps1, eps2=eps2,
            achieved_error=achieved, certified=certified, dh_bits=dh,
            dmax_bits=dmax))
    return records


# ---------------------------------------------------------------------------
# error exponents at a fixed rate

@dataclass
class SweepResult:
    regime: str
    rate: float
    critical_rate: float
    records: list[ExperimentRecord] = field(default_factory=list)
    exponent_bits_per_copy: float = math.nan
    fit_r2: float = math.nan
    floor_hits: int = 0


def critical_rate(src: Dichotomy, dst: Dichotomy) -> float:
    """Asymptotic conversion rate: ratio of the two relative entropies."""
    top = divergences.relative_entropy(src)
    bottom = divergences.relative_entropy(dst)
    if not math.isfinite(top) or bottom <= 0.0:
        raise ValidationError(
            "critical rate needs a finite source relative entropy and a "
            "distinguishable target pair")
    return top / bottom


def error_exponent_sweep(cfg: ExperimentConfig, rate: float) -> SweepResult:
    """How fast the conversion error decays (or the success probability dies).

    Below the critical rate the total error budget is split additively and the
    smallest feasible budget is found per block size; above it no fixed budget
    below one is feasible at large n, so the split is re-parametrized by the
    success weight u = 1 - eps1 - eps2 and the largest feasible u is found.
    The fitted slope of the log2-error (or log2-success) against n over the
    last half of the schedule is reported as an exponent in bits per copy.
    """
    if not (_is_binary_classical(cfg.src) and _is_binary_classical(cfg.dst)
            and cfg.metric is Metric.TRACE and cfg.use_fast_path):
        raise ValidationError(
            "exponent sweeps need binary classical dichotomies under the trace "
            "metric; other inputs cannot resolve exponentially small errors")
    rate = float(rate)
    if rate <= 0.0:
        raise ValidationError(f"rate must be positive, got {rate}")
    crit = critical_rate(cfg.src, cfg.dst)
    if abs(rate - crit) <= NEAR_CRITICAL_BAND * crit:
        raise NearCriticalError(rate, crit)

    regime = "error_decay" if rate < crit else "strong_converse"
    result = SweepResult(regime=regime, rate=rate, critical_rate=crit)
    s = cfg.eps_split
    xs, ys = [], []
    for n in _schedule(cfg.n_min, cfg.n_max, cfg.points):
        m = int(rate * n + 1e-9)
        if m < 1:
            continue
        if regime == "error_decay":
            point = _smallest_feasible_eps(cfg, n, m, s)
        else:
            point = _largest_feasible_success(cfg, n, m, s)
        if point is None:
            continue
        log2_err, rec, hit_floor = point
        result.records.append(rec)
        result.floor_hits += int(hit_floor)
        if not hit_floor:
            xs.append(n)
            ys.append(log2_err)
    half = list(range(len(xs) // 2, len(xs)))
    if len(half) >= 3:
        x = np.array([xs[i] for i in half], dtype=float)
        y = np.array([ys[i] for i in half], dtype=float)
        slope, intercept = np.polyfit(x, y, 1)
        pred = slope * x + intercept
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - np.mean(y)) ** 2))
        result.exponent_bits_per_copy = -float(slope)
        result.fit_r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return result


def _smallest_feasible_eps(cfg: ExperimentConfig, n: int, m: int, s: float):
    """Bisect log2(eps_total) for the additive split eps1 = s*eps."""

    def feasible(log2_eps: float) -> bool:
        have = _dh_bits(cfg.src, n, log2_exclude=log2_eps + math.log2(s))
        need = _dmax_bits(cfg.dst, m, log2_eps=log2_eps + math.log2(1.0 - s),
                          metric=cfg.metric)
        return have >= need - FEASIBILITY_SLACK

    hi = math.log2(1.0 - 1e-9)
    if not feasible(hi):
        return None
    lo = LOG2_FLOOR
    if feasible(lo):
        rec = _sweep_record(cfg, n, m, lo, s, additive=True)
        return lo, rec, True
    while hi - lo > 1e-6:
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    rec = _sweep_record(cfg, n, m, hi, s, additive=True)
    return hi, rec, False


def _largest_feasible_success(cfg: ExperimentConfig, n: int, m: int, s: float):
    """Bisect log2(u) where u = 1 - eps_total, with 1 - eps1 = u/s."""

    def feasible(log2_u: float) -> bool:
        have = _dh_bits(cfg.src, n, log2_include=log2_u - math.log2(s))
        need = _dmax_bits(cfg.dst, m,
                          log2_eps=log2_u + math.log2((1.0 - s) / s),
                          metric=cfg.metric)
        return have >= need - FEASIBILITY_SLACK

    hi = math.log2(s) - 1e-9
    lo = LOG2_FLOOR
    if feasible(hi):
        rec = _sweep_record(cfg, n, m, hi, s, additive=False)
        return hi, rec, True
    if not feasible(lo):
        return None
    while hi - lo > 1e-6:
        mid = (lo + hi) / 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    rec = _sweep_record(cfg, n, m, lo, s, additive=False)
    return lo, rec, False


def _sweep_record(cfg: ExperimentConfig, n: int, m: int, log2_level: float,
                  s: float, additive: bool) -> ExperimentRecord:
    if additive:
        eps_total = 2.0 ** log2_level
        eps1 = s * eps_total
        eps2 = (1.0 - s) * eps_total
        dh = _dh_bits(cfg.src, n, log2_exclude=log2_level + math.log2(s))
        dmax = _dmax_bits(cfg.dst, m, log2_eps=log2_level + math.log2(1.0 - s),
                          metric=cfg.metric)
        certified = eps_total
    else:
        u = 2.0 ** log2_level
        eps1 = max(1.0 - u / s, 0.0)
        eps2 = u * (1.0 - s) / s
        dh = _dh_bits(cfg.src, n, log2_include=log2_level - math.log2(s))
        dmax = _dmax_bits(cfg.dst, m,
                          log2_eps=log2_level + math.log2((1.0 - s) / s),
                          metric=cfg.metric)
        certified = min(1.0, eps1 + eps2)
    return ExperimentRecord(n=n, m=float(m), rate=m / n, eps1=eps1, eps2=eps2,
                            achieved_error=math.nan, certified=certified,
                            dh_bits=dh, dmax_bits=dmax)


# ---------------------------------------------------------------------------
# Renyi sufficient condition for a conversion rate

@dataclass
class SequenceCondition:
    feasible: bool
    rate: float
    delta: float
    kappa_bits: float
    decay_hint_bits: float
    grid: list[tuple[float, float]] = field(default_factory=list)


def check_sequence_condition(src: Dichotomy, dst: Dichotomy, rate: float,
                             deltas=None) -> SequenceCondition:
    """Certificate that ``rate`` target copies per source copy are reachable
    with vanishing error, via a Renyi-order margin.

    Scans offsets delta and evaluates kappa(delta) = (order 1-delta divergence
    of the source) - rate * (order 1+delta divergence of the target); any
    positive margin certifies the rate, and larger delta * kappa products give
    faster guaranteed error decay.  Reports the best offset found.
    """
    rate = float(rate)
    if rate <= 0.0:
        raise ValidationError(f"rate must be positive, got {rate}")
    if deltas is None:
        deltas = np.geomspace(1e-3, 0.5, 25)
    best = (-math.inf, math.nan)
    grid = []
    for delta in deltas:
        delta = float(delta)
        if not (0.0 < delta < 1.0):
            raise ValidationError(f"delta offsets must lie in (0, 1), got {delta}")
        lower = divergences.petz_renyi(src, 1.0 - delta)
        upper = divergences.sandwiched_renyi(dst, 1.0 + delta)
        kappa = lower - rate * upper
        grid.append((delta, kappa))
        if kappa > best[0]:
            best = (kappa, delta)
    kappa, delta = best
    return SequenceCondition(
        feasible=kappa > 0.0, rate=rate, delta=delta, kappa_bits=kappa,
        decay_hint_bits=max(kappa, 0.0) * delta / 8.0, grid=grid)
