#!/usr/bin/env python3
"""Regenerate the JSON fixtures used by the tests, demos, and CLI examples.

Run from the repository root after installing the package:

    python3 fixtures/generate.py

Every fixture is deterministic (fixed seeds, fixed rounding), so reruns leave
the directory byte-identical.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from dichotomies.cli import _dump_json
from dichotomies.resource import GibbsSpec, gibbs_state
from dichotomies.states import (DensityMatrix, Dichotomy, classical_dichotomy,
                                dichotomy_to_json, matrix_to_json,
                                random_density, state_to_json)

HERE = Path(__file__).resolve().parent


def write(name: str, payload) -> None:
    path = HERE / name
    path.write_text(_dump_json(payload))
    print(f"wrote {path.name}")


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotated(d: Dichotomy, theta: float) -> Dichotomy:
    u = rotation(theta)
    return Dichotomy(DensityMatrix(u @ d.rho.mat @ u.T),
                     DensityMatrix(u @ d.sigma.mat @ u.T))


def main() -> None:
    # classical benchmark pairs
    bench_src = classical_dichotomy([0.9, 0.1], [0.5, 0.5])
    bench_dst = classical_dichotomy([0.75, 0.25], [0.5, 0.5])
    write("classical_09_05.json", dichotomy_to_json(bench_src))
    write("classical_075_05.json", dichotomy_to_json(bench_dst))

    # minimal one-shot fixture: pure state against the maximally mixed state
    pure = DensityMatrix(np.diag([1.0, 0.0]))
    mixed = DensityMatrix(np.eye(2) / 2)
    write("pure_vs_mixed.json", dichotomy_to_json(Dichotomy(pure, mixed)))

    # coherence fixtures
    plus = DensityMatrix(np.full((2, 2), 0.5))
    write("plus_state.json", state_to_json(plus))
    write("mixed_qubit.json", state_to_json(
        DensityMatrix(0.5 * plus.mat + 0.25 * np.eye(2))))

    # exact synthesis: rank-deficient source arm, modest target
    exact_route_src = Dichotomy(
        DensityMatrix(np.diag([1.0, 0.0, 0.0])),
        DensityMatrix(np.diag([0.2, 0.5, 0.3])))
    write("exact_route_src.json", dichotomy_to_json(exact_route_src))
    write("exact_route_dst.json", dichotomy_to_json(
        classical_dichotomy([0.8, 0.2], [0.5, 0.5])))

    # exact-mode refusal: full-rank source cannot feed either support route
    write("full_rank_src.json", dichotomy_to_json(
        classical_dichotomy([0.5, 0.3, 0.2], [0.2, 0.3, 0.5])))

    # approximate synthesis: rotated benchmark source, generic mixed target
    write("qubit_src.json", dichotomy_to_json(rotated(bench_src, 0.3)))
    rho2 = DensityMatrix(0.8 * random_density(2, seed=11).mat + 0.1 * np.eye(2))
    sigma2 = DensityMatrix(0.3 * rho2.mat + 0.35 * np.eye(2))
    write("qubit_dst.json", dichotomy_to_json(Dichotomy(rho2, sigma2)))

    # thermodynamics: two-level system, unit inverse temperature
    ham = np.diag([0.0, 1.0])
    write("hamiltonian_2level.json", matrix_to_json(ham))
    write("gibbs_2level_beta1.json", state_to_json(
        gibbs_state(GibbsSpec(ham, 1.0))))
    write("excited_state.json", state_to_json(DensityMatrix(np.diag([0.0, 1.0]))))


if __name__ == "__main__":
    main()
