"""Closed-form lower bounds on the measure and one-shot distillation bounds.

The fidelity-based lower bound and the one-shot rate bounds are scalar
formulas; the Renyi one-shot bound additionally runs one solver call per
grid point and minimizes over the declared grid (each grid point is a valid
upper bound, so the grid minimum is one too).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

from .entropy import binary_entropy, classical_rel_entropy
from .solver import SolveConfig, renyi_rains
from .states import DensityMatrix, fidelity, ghz_state

DEFAULT_ALPHA_GRID = (1.001, 1.01, 1.1, 1.25, 1.5, 2.0)


def ghz_fidelity_lower_bound(f: float, d: int) -> tuple[float, float]:
    """Fidelity-based lower bounds for equal local dimension d.

    Returns (exact, relaxed) with
        exact   = D((F, 1-F) || (1/d, 1-1/d)),
        relaxed = F log2 d - h2(F),
    valid when F >= 1/d; smaller F violates the bound's hypothesis and is
    rejected rather than extrapolated.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"fidelity must lie in [0, 1], got {f!r}")
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d!r}")
    if f < 1.0 / d:
        raise ValueError(
            f"fidelity {f!r} is below 1/d = {1.0 / d!r}; the bound requires F >= 1/d"
        )
    exact = classical_rel_entropy([f, 1.0 - f], [1.0 / d, 1.0 - 1.0 / d])
    relaxed = f * math.log2(d) - binary_entropy(f)
    return float(exact), float(relaxed)


def one_shot_bound(r_value: float, epsilon: float) -> float:
    """One-shot distillation upper bound (R + h2(eps)) / (1 - eps)."""
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    return (r_value + binary_entropy(epsilon)) / (1.0 - epsilon)


def renyi_one_shot_bound(
    rho: DensityMatrix,
    epsilon: float,
    alpha_grid=DEFAULT_ALPHA_GRID,
    cfg: SolveConfig | None = None,
    max_workers: int = 1,
) -> float:
    """Minimum over the alpha grid of the Renyi one-shot bound.

    Each grid point contributes R_alpha(rho) + (alpha/(alpha-1)) log2(1/(1-eps));
    grid points may be evaluated concurrently.
    """
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon!r}")
    alphas = list(alpha_grid)
    if not alphas:
        raise ValueError("alpha grid must be nonempty")
    penalty = -math.log2(1.0 - epsilon)

    def point(alpha: float) -> float:
        rep = renyi_rains(rho, alpha, cfg)
        return rep.value + alpha / (alpha - 1.0) * penalty

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            values = list(ex.map(point, alphas))
    else:
        values = [point(a) for a in alphas]
    return min(values)


def renyi_lower_bound_check(
    rho: DensityMatrix,
    alpha: float,
    f: float | None = None,
    d: int | None = None,
    cfg: SolveConfig | None = None,
    slack: float = 1e-3,
) -> bool:
    """Verification harness for the Renyi fidelity inequality.

    Checks R_alpha(rho) - (alpha/(alpha-1)) log2 F >= log2 d within slack,
    where F is the fidelity with the GHZ state of matching shape (computed
    when not supplied). Returns the verdict; it does not produce a bound.
    """
    dims = rho.shape.dims
    if d is None:
        d = dims[0]
    if any(x != d for x in dims):
        raise ValueError(f"harness needs equal local dims d={d}, got {dims}")
    if f is None:
        f = fidelity(ghz_state(d, rho.shape.k), rho)
    rep = renyi_rains(rho, alpha, cfg)
    if f <= 0.0:
        return True
    lhs = rep.value - alpha / (alpha - 1.0) * math.log2(f)
    return lhs >= math.log2(d) - slack
