"""Command-line driver.

Subcommands
-----------
divergence
    Evaluate a divergence (asymptotic or one-shot) on a dichotomy JSON file.
synthesize
    Build an exact or approximate conversion channel and verify it.
sweep
    Tensor-power conversion experiments: rate curves and error-exponent fits.
resource
    Athermality verdicts and coherence rates.

Conventions: all values are in bits; floats in CSV/JSON are formatted to nine
significant digits so outputs diff cleanly; every file-producing command also
writes a ``<name>.manifest.json`` sidecar recording the command, input paths,
parameters, seed, tool version, and a timestamp.  The output files themselves
carry no timestamps, so reruns are byte-identical.

Exit codes: 0 success; 2 validation failure; 3 infinite value in human mode;
4 synthesis precondition refusal; 5 near-critical rate refusal.

The environment variable ``DICHOTOMY_DIM_CAP`` overrides the dimension caps
(solver block size and tensor-power truncation).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, conic
from .asymptotics import (ExperimentConfig, NearCriticalError, critical_rate,
                          error_exponent_sweep, rate_curve, records_to_csv)
from .channels import (SynthesisRefusedError, channel_to_json,
                       synthesize_approx, synthesize_exact,
                       verify_transformation)
from .divergences import (d_max, d_min, petz_renyi, relative_entropy,
                          relative_entropy_variance, sandwiched_renyi)
from .oneshot import hypothesis_testing, smooth_dmax
from .resource import (GibbsSpec, athermality_feasible,
                       coherence_distillation_rate, dio_transformation_rate)
from .states import (Metric, ValidationError, dichotomy_from_json,
                     matrix_from_json, state_from_json)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INFINITE = 3
EXIT_REFUSED = 4
EXIT_NEAR_CRITICAL = 5

DIM_CAP_ENV = "DICHOTOMY_DIM_CAP"

DIVERGENCE_KINDS = ("relent", "petz", "sandwiched", "dmin", "dmax", "var",
                    "dh", "smooth-dmax")


# ---------------------------------------------------------------------------
# formatting and manifests

def _sig9(x: float):
    """Round a float to 9 significant digits; infinities become strings."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.9g}")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _sig9(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def _manifest(command: str, inputs: list[str], parameters: dict) -> dict:
    return {
        "command": command,
        "inputs": [str(p) for p in inputs],
        "parameters": _jsonable(parameters),
        "seed": 0,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _sidecar_path(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _write_manifest(out: Path, manifest: dict) -> None:
    _sidecar_path(out, ".manifest.json").write_text(_dump_json(manifest))


def _load_json(path: str, what: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"{what}: file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what}: not valid JSON ({path}): {exc}") from None


def _load_dichotomy(path: str, what: str):
    return dichotomy_from_json(_load_json(path, what))


def _load_state(path: str, what: str):
    return state_from_json(_load_json(path, what))


def _metric(name: str) -> Metric:
    return Metric(name)


def _env_dim_cap() -> int | None:
    raw = os.environ.get(DIM_CAP_ENV)
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(
            f"{DIM_CAP_ENV} must be a positive integer, got {raw!r}") from None
    if cap <= 0:
        raise ValidationError(
            f"{DIM_CAP_ENV} must be a positive integer, got {raw!r}")
    return cap


# ---------------------------------------------------------------------------
# divergence

def cmd_divergence(args) -> int:
    d = _load_dichotomy(args.input, "--input")
    kind = args.kind
    params: dict = {}
    if kind in ("petz", "sandwiched"):
        if args.alpha is None:
            raise ValidationError(f"--alpha is required for kind {kind!r}")
        params["alpha"] = args.alpha
    if kind in ("dh", "smooth-dmax"):
        if args.eps is None:
            raise ValidationError(f"--eps is required for kind {kind!r}")
        params["eps"] = args.eps
    if kind == "smooth-dmax":
        params["metric"] = args.metric

    if kind == "relent":
        bits = relative_entropy(d)
    elif kind == "var":
        bits = relative_entropy_variance(d)
    elif kind == "petz":
        bits = petz_renyi(d, args.alpha)
    elif kind == "sandwiched":
        bits = sandwiched_renyi(d, args.alpha)
    elif kind == "dmin":
        bits = d_min(d)
    elif kind == "dmax":
        bits = d_max(d)
    elif kind == "dh":
        bits = hypothesis_testing(d, args.eps).value_bits
    else:  # smooth-dmax
        bits = smooth_dmax(d, args.eps, _metric(args.metric)).value_bits

    if args.json:
        payload = {
            "kind": kind,
            "bits": "inf" if math.isinf(bits) else bits,
            "params": params,
            "manifest": _manifest("divergence", [args.input],
                                  dict(params, kind=kind)),
        }
        sys.stdout.write(_dump_json(payload))
        return EXIT_OK
    if math.isinf(bits):
        print("inf")
        return EXIT_INFINITE
    print(f"{bits:.6f}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# synthesize

def cmd_synthesize(args) -> int:
    src = _load_dichotomy(args.src, "--src")
    dst = _load_dichotomy(args.dst, "--dst")
    metric = _metric(args.metric)
    out = Path(args.out)

    if args.mode == "exact":
        channel = synthesize_exact(src, dst)
        certified = 0.0
        params = {"mode": "exact"}
    else:
        if args.eps1 is None or args.eps2 is None:
            raise ValidationError("--eps1 and --eps2 are required for approx mode")
        result = synthesize_approx(src, dst, args.eps1, args.eps2, metric)
        channel = result.channel
        certified = result.certified_rho_error
        params = {"mode": "approx", "eps1": args.eps1, "eps2": args.eps2,
                  "metric": args.metric}

    measured = verify_transformation(channel, src, dst, metric)
    report = {
        "sigma_error": measured.sigma_error,
        "rho_error": measured.rho_error,
        "certified_bound": certified,
        "metric": metric.value,
    }
    out.write_text(_dump_json(channel_to_json(channel)))
    _sidecar_path(out, ".report.json").write_text(_dump_json(report))
    _write_manifest(out, _manifest("synthesize", [args.src, args.dst], params))
    for key in ("sigma_error", "rho_error", "certified_bound"):
        print(f"{key}: {_sig9(report[key])}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

def cmd_sweep(args) -> int:
    src = _load_dichotomy(args.src, "--src")
    dst = _load_dichotomy(args.dst, "--dst")
    if args.classical and not (src.is_classical() and dst.is_classical()):
        raise ValidationError(
            "--classical requires diagonal inputs on both sides")
    cfg = ExperimentConfig(src=src, dst=dst, eps_total=args.eps,
                           n_min=args.n_min, n_max=args.n_max,
                           points=args.points, use_fast_path=True,
                           dim_cap=_env_dim_cap())
    out = Path(args.out)
    params = {"eps": args.eps, "n_min": args.n_min, "n_max": args.n_max,
              "points": args.points, "classical": bool(args.classical)}

    if args.rate is None:
        records = rate_curve(cfg)
        out.write_text(records_to_csv(records))
        _write_manifest(out, _manifest("sweep", [args.src, args.dst], params))
        crit = critical_rate(src, dst)
        last = records[-1]
        print(f"final rate at n={last.n}: {_sig9(last.rate)} "
              f"(critical {_sig9(crit)})")
        return EXIT_OK

    params["rate"] = args.rate
    sweep = error_exponent_sweep(cfg, args.rate)
    out.write_text(records_to_csv(sweep.records))
    fit = {
        "rate": sweep.rate,
        "critical_rate": sweep.critical_rate,
        "regime": sweep.regime,
        "exponent_bits_per_copy": sweep.exponent_bits_per_copy,
        "fit_r2": sweep.fit_r2,
        "floor_hits": sweep.floor_hits,
    }
    _sidecar_path(out, ".fit.json").write_text(_dump_json(fit))
    _write_manifest(out, _manifest("sweep", [args.src, args.dst], params))
    print(f"regime: {sweep.regime}; fitted slope "
          f"{_sig9(sweep.exponent_bits_per_copy)} bits/copy "
          f"(r2 {_sig9(sweep.fit_r2)})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# resource

def cmd_resource(args) -> int:
    if args.resource_cmd == "athermality":
        rho1 = _load_state(args.rho1, "--rho1")
        rho2 = _load_state(args.rho2, "--rho2")
        ham = matrix_from_json(_load_json(args.hamiltonian, "--hamiltonian"))
        try:
            spec = GibbsSpec(ham, args.beta)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        report = athermality_feasible(rho1, rho2, spec)
        payload = {
            "verdict": report.verdict,
            "lambda1_bits": report.lambda1_bits,
            "lambda2_bits": report.lambda2_bits,
            "free_energy1_bits": report.free_energy1_bits,
            "free_energy2_bits": report.free_energy2_bits,
        }
    else:  # coherence
        rho = _load_state(args.rho, "--rho")
        payload = {"coherence_bits": coherence_distillation_rate(rho)}
        if args.sigma is not None:
            sigma = _load_state(args.sigma, "--sigma")
            rate = dio_transformation_rate(rho, sigma)
            payload["transformation_rate"] = "inf" if math.isinf(rate) else rate
    sys.stdout.write(_dump_json(payload))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dichotomies",
        description="Divergences, channel synthesis, and conversion-rate "
                    "experiments for pairs of quantum states.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    dv = sub.add_parser("divergence", help="evaluate a divergence in bits")
    dv.add_argument("--kind", required=True, choices=DIVERGENCE_KINDS)
    dv.add_argument("--alpha", type=float, help="Renyi order (petz/sandwiched)")
    dv.add_argument("--eps", type=float, help="error budget (dh/smooth-dmax)")
    dv.add_argument("--metric", choices=("trace", "purified"), default="trace")
    dv.add_argument("--input", required=True, help="dichotomy JSON file")
    dv.add_argument("--json", action="store_true", help="machine-readable output")
    dv.set_defaults(func=cmd_divergence)

    sy = sub.add_parser("synthesize", help="build a conversion channel")
    sy.add_argument("--mode", required=True, choices=("exact", "approx"))
    sy.add_argument("--src", required=True, help="source dichotomy JSON")
    sy.add_argument("--dst", required=True, help="target dichotomy JSON")
    sy.add_argument("--eps1", type=float, help="test-side budget (approx)")
    sy.add_argument("--eps2", type=float, help="smoothing budget (approx)")
    sy.add_argument("--metric", choices=("trace", "purified"), default="trace")
    sy.add_argument("--out", required=True, help="channel JSON output path")
    sy.set_defaults(func=cmd_synthesize)

    sw = sub.add_parser("sweep", help="tensor-power conversion experiments")
    sw.add_argument("--src", required=True)
    sw.add_argument("--dst", required=True)
    sw.add_argument("--eps", type=float, required=True, help="total error budget")
    sw.add_argument("--rate", type=float,
                    help="fix the copy ratio and sweep the error exponent")
    sw.add_argument("--n-max", type=int, required=True, dest="n_max")
    sw.add_argument("--n-min", type=int, default=1, dest="n_min")
    sw.add_argument("--points", type=int, default=24)
    sw.add_argument("--classical", action="store_true",
                    help="require diagonal inputs (closed-form path)")
    sw.add_argument("--out", required=True, help="CSV output path")
    sw.set_defaults(func=cmd_sweep)

    rs = sub.add_parser("resource", help="athermality and coherence readings")
    rsub = rs.add_subparsers(dest="resource_cmd", required=True)
    at = rsub.add_parser("athermality")
    at.add_argument("--rho1", required=True, help="input state JSON")
    at.add_argument("--rho2", required=True, help="target state JSON")
    at.add_argument("--hamiltonian", required=True, help="matrix JSON")
    at.add_argument("--beta", type=float, required=True)
    co = rsub.add_parser("coherence")
    co.add_argument("--rho", required=True, help="state JSON")
    co.add_argument("--sigma", help="optional target state JSON")
    rs.set_defaults(func=cmd_resource)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0

    try:
        cap = _env_dim_cap()
        if cap is not None:
            conic.DIM_CAP = cap
        return args.func(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SynthesisRefusedError as exc:
        print(f"precondition refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except NearCriticalError as exc:
        lam1 = relative_entropy(_load_dichotomy(args.src, "--src"))
        lam2 = relative_entropy(_load_dichotomy(args.dst, "--dst"))
        print(f"near-critical refusal: lambda1={_sig9(lam1)} bits, "
              f"lambda2={_sig9(lam2)} bits; {exc}", file=sys.stderr)
        return EXIT_NEAR_CRITICAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
