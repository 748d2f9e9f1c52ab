"""End-to-end tests for the command-line interface (in-process)."""

import importlib.util
import json
import math
import re
from pathlib import Path

import numpy as np
import pytest

from dichotomies import conic
from dichotomies.cli import main
from dichotomies.states import (DensityMatrix, Dichotomy, dichotomy_to_json,
                                state_to_json)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

SRC = str(FIXTURES / "classical_09_05.json")
DST = str(FIXTURES / "classical_075_05.json")

SIX_DECIMALS = re.compile(r"^\d+\.\d{6}$")


def _write_json(path: Path, payload) -> str:
    path.write_text(json.dumps(payload))
    return str(path)


class TestDivergenceCommand:
    def test_relative_entropy_human(self, capsys):
        assert main(["divergence", "--kind", "relent", "--input", SRC]) == 0
        out = capsys.readouterr().out.strip()
        assert SIX_DECIMALS.match(out)
        assert abs(float(out) - 0.531004) < 1e-6

    def test_hypothesis_test_human(self, capsys):
        code = main(["divergence", "--kind", "dh", "--eps", "0.5",
                     "--input", SRC])
        assert code == 0
        assert capsys.readouterr().out.strip() == "1.847997"

    def test_min_divergence_human(self, capsys):
        code = main(["divergence", "--kind", "dmin",
                     "--input", str(FIXTURES / "pure_vs_mixed.json")])
        assert code == 0
        assert capsys.readouterr().out.strip() == "1.000000"

    def test_smooth_dmax_human(self, capsys):
        code = main(["divergence", "--kind", "smooth-dmax", "--eps", "0.1",
                     "--metric", "trace", "--input", DST])
        assert code == 0
        out = capsys.readouterr().out.strip()
        assert SIX_DECIMALS.match(out)
        assert abs(float(out) - 0.378512) < 1e-5

    def test_json_payload(self, capsys):
        code = main(["divergence", "--kind", "relent", "--input", SRC,
                     "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert set(payload) == {"kind", "bits", "params", "manifest"}
        assert payload["kind"] == "relent"
        assert abs(payload["bits"] - 0.531004406) < 1e-8
        manifest = payload["manifest"]
        assert set(manifest) == {"command", "inputs", "parameters", "seed",
                                 "timestamp", "version"}
        assert manifest["seed"] == 0
        assert manifest["inputs"] == [SRC]

    def test_missing_alpha_is_validation_error(self, capsys):
        code = main(["divergence", "--kind", "petz", "--input", SRC])
        assert code == 2
        err = capsys.readouterr().err
        assert "validation error" in err
        assert "--alpha" in err

    def test_alpha_domain_error(self, capsys):
        code = main(["divergence", "--kind", "petz", "--alpha", "1.0",
                     "--input", SRC])
        assert code == 2
        assert "order" in capsys.readouterr().err

    def test_infinite_value_human(self, tmp_path, capsys):
        bad = Dichotomy(DensityMatrix(np.eye(2) / 2),
                        DensityMatrix(np.diag([1.0, 0.0])))
        path = _write_json(tmp_path / "bad.json", dichotomy_to_json(bad))
        code = main(["divergence", "--kind", "relent", "--input", path])
        assert code == 3
        assert capsys.readouterr().out.strip() == "inf"

    def test_infinite_value_json_is_success(self, tmp_path, capsys):
        bad = Dichotomy(DensityMatrix(np.eye(2) / 2),
                        DensityMatrix(np.diag([1.0, 0.0])))
        path = _write_json(tmp_path / "bad.json", dichotomy_to_json(bad))
        code = main(["divergence", "--kind", "relent", "--input", path,
                     "--json"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["bits"] == "inf"

    def test_missing_file(self, capsys):
        code = main(["divergence", "--kind", "relent", "--input",
                     "/nonexistent.json"])
        assert code == 2
        assert "file not found" in capsys.readouterr().err

    def test_unknown_kind_is_usage_error(self, capsys):
        assert main(["divergence", "--kind", "bogus", "--input", SRC]) == 2

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 2


class TestSynthesizeCommand:
    def test_exact_writes_channel_report_manifest(self, tmp_path, capsys):
        out = tmp_path / "channel.json"
        code = main(["synthesize", "--mode", "exact",
                     "--src", str(FIXTURES / "exact_route_src.json"),
                     "--dst", str(FIXTURES / "exact_route_dst.json"),
                     "--out", str(out)])
        assert code == 0
        stdout = capsys.readouterr().out
        for key in ("sigma_error:", "rho_error:", "certified_bound:"):
            assert key in stdout
        channel = json.loads(out.read_text())
        assert {"effect", "prep_accept", "prep_reject"} <= set(channel)
        report = json.loads((tmp_path / "channel.report.json").read_text())
        assert report["sigma_error"] <= 1e-12
        assert report["rho_error"] <= 1e-12
        assert report["certified_bound"] == 0.0
        assert report["metric"] == "trace"
        manifest = json.loads((tmp_path / "channel.manifest.json").read_text())
        assert manifest["command"] == "synthesize"
        assert manifest["parameters"]["mode"] == "exact"

    def test_approx_respects_certified_budget(self, tmp_path):
        out = tmp_path / "approx.json"
        code = main(["synthesize", "--mode", "approx",
                     "--src", str(FIXTURES / "qubit_src.json"),
                     "--dst", str(FIXTURES / "qubit_dst.json"),
                     "--eps1", "0.1", "--eps2", "0.1", "--out", str(out)])
        assert code == 0
        report = json.loads((tmp_path / "approx.report.json").read_text())
        assert report["sigma_error"] <= 1e-8
        assert report["rho_error"] <= report["certified_bound"] + 1e-9
        assert report["certified_bound"] == pytest.approx(0.2)

    def test_exact_refusal_exits_4_and_writes_nothing(self, tmp_path, capsys):
        out = tmp_path / "never.json"
        code = main(["synthesize", "--mode", "exact",
                     "--src", str(FIXTURES / "full_rank_src.json"),
                     "--dst", str(FIXTURES / "exact_route_dst.json"),
                     "--out", str(out)])
        assert code == 4
        err = capsys.readouterr().err
        assert "precondition refused" in err
        assert "min-divergence" in err
        assert not out.exists()
        assert not (tmp_path / "never.report.json").exists()

    def test_approx_requires_budgets(self, capsys):
        code = main(["synthesize", "--mode", "approx", "--src", SRC,
                     "--dst", DST, "--out", "/tmp/unused.json"])
        assert code == 2
        assert "--eps1" in capsys.readouterr().err

    def test_outputs_are_byte_deterministic(self, tmp_path):
        texts = []
        for name in ("a", "b"):
            out = tmp_path / f"{name}.json"
            assert main(["synthesize", "--mode", "exact",
                         "--src", str(FIXTURES / "exact_route_src.json"),
                         "--dst", str(FIXTURES / "exact_route_dst.json"),
                         "--out", str(out)]) == 0
            report = (tmp_path / f"{name}.report.json").read_text()
            manifest = json.loads(
                (tmp_path / f"{name}.manifest.json").read_text())
            del manifest["timestamp"]
            texts.append((out.read_text(), report, manifest))
        assert texts[0] == texts[1]


class TestSweepCommand:
    def test_rate_curve_csv(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = main(["sweep", "--src", SRC, "--dst", DST, "--eps", "0.1",
                     "--n-max", "8", "--points", "4", "--classical",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == ("n,m,rate,eps1,eps2,achieved_error,certified,"
                            "dh_bits,dmax_bits")
        assert len(lines) >= 4
        stdout = capsys.readouterr().out
        assert "final rate" in stdout and "critical" in stdout
        assert (tmp_path / "curve.manifest.json").exists()

    def test_exponent_fit_sidecar(self, tmp_path, capsys):
        out = tmp_path / "decay.csv"
        code = main(["sweep", "--src", SRC, "--dst", DST, "--eps", "0.05",
                     "--rate", "2.0", "--n-min", "100", "--n-max", "400",
                     "--points", "6", "--out", str(out)])
        assert code == 0
        fit = json.loads((tmp_path / "decay.fit.json").read_text())
        assert set(fit) == {"rate", "critical_rate", "regime",
                            "exponent_bits_per_copy", "fit_r2", "floor_hits"}
        assert fit["regime"] == "error_decay"
        assert fit["exponent_bits_per_copy"] > 0.0
        assert fit["floor_hits"] == 0
        assert "regime: error_decay" in capsys.readouterr().out

    def test_near_critical_exits_5_with_both_levels(self, tmp_path, capsys):
        code = main(["sweep", "--src", SRC, "--dst", DST, "--eps", "0.05",
                     "--rate", "2.8", "--n-max", "50",
                     "--out", str(tmp_path / "x.csv")])
        assert code == 5
        err = capsys.readouterr().err
        assert "near-critical refusal" in err
        assert "lambda1=0.531004406" in err
        assert "lambda2=0.188721876" in err

    def test_classical_flag_rejects_coherent_input(self, tmp_path, capsys):
        code = main(["sweep", "--src", str(FIXTURES / "qubit_src.json"),
                     "--dst", DST, "--eps", "0.1", "--n-max", "4",
                     "--classical", "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "diagonal" in capsys.readouterr().err

    def test_csv_reruns_are_byte_identical(self, tmp_path):
        blobs = []
        for name in ("r1.csv", "r2.csv"):
            out = tmp_path / name
            assert main(["sweep", "--src", SRC, "--dst", DST, "--eps", "0.1",
                         "--n-max", "6", "--points", "3",
                         "--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]


class TestResourceCommand:
    def test_athermality_payload(self, capsys):
        code = main(["resource", "athermality",
                     "--rho1", str(FIXTURES / "excited_state.json"),
                     "--rho2", str(FIXTURES / "gibbs_2level_beta1.json"),
                     "--hamiltonian", str(FIXTURES / "hamiltonian_2level.json"),
                     "--beta", "1.0"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["verdict"] == "AsymptoticallyFeasible"
        assert payload["lambda1_bits"] > payload["lambda2_bits"]
        assert payload["free_energy1_bits"] > payload["free_energy2_bits"]

    def test_coherence_payload_with_rate(self, capsys):
        code = main(["resource", "coherence",
                     "--rho", str(FIXTURES / "plus_state.json"),
                     "--sigma", str(FIXTURES / "excited_state.json")])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["coherence_bits"] == pytest.approx(1.0, abs=1e-9)
        assert payload["transformation_rate"] == "inf"

    def test_coherence_without_target(self, capsys):
        code = main(["resource", "coherence",
                     "--rho", str(FIXTURES / "mixed_qubit.json")])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["coherence_bits"] == pytest.approx(0.188721876, abs=1e-8)
        assert "transformation_rate" not in payload

    def test_bad_beta(self, capsys):
        code = main(["resource", "athermality",
                     "--rho1", str(FIXTURES / "excited_state.json"),
                     "--rho2", str(FIXTURES / "gibbs_2level_beta1.json"),
                     "--hamiltonian", str(FIXTURES / "hamiltonian_2level.json"),
                     "--beta", "0.0"])
        assert code == 2
        assert "beta" in capsys.readouterr().err


class TestDimCapEnvironment:
    def test_cap_blocks_large_solves(self, monkeypatch, capsys):
        monkeypatch.setattr(conic, "DIM_CAP", conic.DIM_CAP)
        monkeypatch.setenv("DICHOTOMY_DIM_CAP", "4")
        code = main(["divergence", "--kind", "smooth-dmax", "--eps", "0.1",
                     "--input", str(FIXTURES / "qubit_src.json")])
        assert code == 2
        assert "exceeds cap 4" in capsys.readouterr().err

    def test_invalid_cap_is_validation_error(self, monkeypatch, capsys):
        monkeypatch.setattr(conic, "DIM_CAP", conic.DIM_CAP)
        monkeypatch.setenv("DICHOTOMY_DIM_CAP", "banana")
        code = main(["divergence", "--kind", "relent", "--input", SRC])
        assert code == 2
        assert "DICHOTOMY_DIM_CAP" in capsys.readouterr().err


class TestFixtureStability:
    def test_regeneration_is_byte_identical(self, tmp_path, monkeypatch,
                                            capsys):
        spec = importlib.util.spec_from_file_location(
            "fixture_generate", FIXTURES / "generate.py")
        module = importlib.util.module_from_spec(spec)
        spec.loader.exec_module(module)
        monkeypatch.setattr(module, "HERE", tmp_path)
        module.main()
        regenerated = sorted(p.name for p in tmp_path.glob("*.json"))
        committed = sorted(p.name for p in FIXTURES.glob("*.json"))
        assert regenerated == committed
        for name in regenerated:
            assert (tmp_path / name).read_bytes() == \
                (FIXTURES / name).read_bytes(), name
