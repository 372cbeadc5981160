"""Seeded property suites behind the CLI check command.

Each suite re-verifies a structural property of the measures on freshly
sampled instances: monotonicity under selective local instruments, the
entropic identities, and the feasible-set inequalities. Counts are sized
for an interactive run; the test suite exercises the same properties at
full scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import classical_rel_entropy, quantum_rel_entropy, sandwiched_renyi
from .feasible import assemble, random_feasible_point, t_membership
from .monotone import apply_selective, local_instrument
from .solver import SolveConfig, gmre
from .states import (
    DensityMatrix,
    PartyShape,
    ghz_state,
    partial_trace,
    random_density_matrix,
)


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def available_suites() -> set[str]:
    return {"monotonicity", "entropy", "feasible"}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name == "monotonicity":
        return _suite_monotonicity(seed)
    if name == "entropy":
        return _suite_entropy(seed)
    if name == "feasible":
        return _suite_feasible(seed)
    raise ValueError(f"unknown suite {name!r}")


def _suite_monotonicity(seed: int, trials: int = 5) -> list[CheckResult]:
    shape = PartyShape([2, 2, 2])
    cfg = SolveConfig()
    ghz = ghz_state(2, 3).matrix
    worst = -math.inf
    for k in range(trials):
        base = random_density_matrix(shape, seed=seed * 1000 + k).matrix
        rho = DensityMatrix(shape, 0.5 * ghz + 0.5 * base)
        op = local_instrument(shape, party=k % 3, seed=seed * 1000 + 500 + k)
        before = gmre(rho, cfg).value
        after = sum(p * gmre(out, cfg).value for p, out in apply_selective(op, rho))
        worst = max(worst, after - before)
    passed = worst <= 2e-3
    return [CheckResult(
        "monotonicity", "average measure never increases under local instruments",
        bool(passed), f"max increase {worst:.2e} over {trials} trials",
    )]


def _suite_entropy(seed: int, trials: int = 10) -> list[CheckResult]:
    shape = PartyShape([2, 2])
    out = []
    # data processing under discarding a party
    worst = -math.inf
    for k in range(trials):
        rho = random_density_matrix(shape, seed=seed * 77 + k)
        sig = random_density_matrix(shape, seed=seed * 77 + 1000 + k)
        before = quantum_rel_entropy(rho, sig)
        after = quantum_rel_entropy(
            partial_trace(rho.matrix, shape, [1]),
            partial_trace(sig.matrix, shape, [1]),
        )
        worst = max(worst, after - before)
    out.append(CheckResult(
        "entropy", "relative entropy contracts under partial trace",
        bool(worst <= 1e-8), f"max increase {worst:.2e}",
    ))
    # direct-sum equality
    rng = np.random.default_rng(seed + 13)
    worst = 0.0
    for k in range(trials):
        p = rng.dirichlet([1.0, 1.0])
        q = rng.uniform(0.1, 1.0, size=2)
        q /= q.sum() * rng.uniform(1.0, 2.0)
        blocks_r = [random_density_matrix(shape, seed=seed * 31 + 2 * k + i).matrix
                    for i in range(2)]
        blocks_s = [random_density_matrix(shape, seed=seed * 31 + 700 + 2 * k + i).matrix
                    for i in range(2)]
        d = shape.dim
        omega = np.zeros((2 * d, 2 * d), dtype=complex)
        tau = np.zeros((2 * d, 2 * d), dtype=complex)
        for i in range(2):
            omega[i * d:(i + 1) * d, i * d:(i + 1) * d] = p[i] * blocks_r[i]
            tau[i * d:(i + 1) * d, i * d:(i + 1) * d] = q[i] * blocks_s[i]
        joint = quantum_rel_entropy(omega, tau)
        split = classical_rel_entropy(p, q) + sum(
            p[i] * quantum_rel_entropy(blocks_r[i], blocks_s[i]) for i in range(2)
        )
        worst = max(worst, abs(joint - split))
    out.append(CheckResult(
        "entropy", "direct-sum equality for block-diagonal pairs",
        bool(worst <= 1e-8), f"max deviation {worst:.2e}",
    ))
    # Renyi ordering in alpha
    worst = -math.inf
    for k in range(trials):
        rho = random_density_matrix(shape, seed=seed * 91 + k)
        sig = random_density_matrix(shape, seed=seed * 91 + 3000 + k)
        a = sandwiched_renyi(rho, sig, 1.2)
        b = sandwiched_renyi(rho, sig, 1.5)
        c = sandwiched_renyi(rho, sig, 2.0)
        worst = max(worst, a - b, b - c)
    out.append(CheckResult(
        "entropy", "sandwiched divergence nondecreasing in alpha",
        bool(worst <= 1e-9), f"max inversion {worst:.2e}",
    ))
    return out


def _suite_feasible(seed: int, points: int = 50) -> list[CheckResult]:
    shape = PartyShape([2, 2, 2])
    ghz = ghz_state(2, 3)
    worst_overlap = -math.inf
    worst_trace = -math.inf
    all_member = True
    for k in range(points):
        pt = random_feasible_point(shape, seed=seed * 101 + k)
        sigma = assemble(pt)
        worst_overlap = max(
            worst_overlap, float(np.trace(ghz.matrix @ sigma).real) - 0.5
        )
        worst_trace = max(worst_trace, float(np.trace(sigma).real) - 1.0)
        all_member = all_member and t_membership(pt).feasible
    return [
        CheckResult(
            "feasible", "assembled overlap with the GHZ state at most 1/d",
            bool(worst_overlap <= 1e-9),
            f"max excess {worst_overlap:.2e} over {points} points",
        ),
        CheckResult(
            "feasible", "assembled trace at most 1",
            bool(worst_trace <= 1e-8), f"max excess {worst_trace:.2e}",
        ),
        CheckResult(
            "feasible", "random split points satisfy membership",
            bool(all_member), f"{points} points checked",
        ),
    ]
