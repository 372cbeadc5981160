"""First-order solvers for the entanglement measures.

Every measure minimizes a divergence over a lifted, semidefinite-
representable feasible set. The engine is accelerated projected-gradient
descent (a monotone FISTA variant with backtracking on the local curvature
bound) run through a smoothing continuation: the divergence is evaluated at
tau + delta*I for a decreasing schedule of shifts, each stage warm-starting
the next, so iterates cross the ill-conditioned boundary region of the PSD
cone in a few well-conditioned sweeps. The monotone safeguard and the
reported objective always use the final (sharpest) shift, so the accepted
objective sequence is nonincreasing across the whole run.

Inner projections run Dykstra's alternating method over closed-form pieces.
Internally the variables live on the partial-transpose side: one Hermitian
block Y_m per bipartition, with assembled operator sum_m T_m(Y_m) and
feasibility  sum_m ||Y_m||_1 <= 1,  T_m(Y_m) >= 0.  This is an exact
reparameterization of the positive/negative split form used by the feasible
module (splits are recovered by Jordan-Hahn decomposition), and it keeps
every projection a pair of spectral operations: a joint trace-norm-ball
soft-threshold and a batched clip of the transposed blocks.

Stopping combines two certificates: a relaxed Frank-Wolfe gap

    f(x) - f* <= <grad, tau(x)> + max_m ||T_m(grad)||_inf

(closed form, and exact at the анchor states), plus long-window stagnation
of the monotone objective where the relaxation is loose. Solves whose
start already achieves objective <= 0 (the state decomposes within budget)
return immediately: zero is the exact minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .feasible import FEAS_TOL, TSetPoint, jordan_hahn
from .linalg import EIG_FLOOR, LN2, hermitian_part, trace_norm
from .states import (
    Bipartition,
    DensityMatrix,
    PartyShape,
    enumerate_bipartitions,
    partial_transpose,
)

GMN_BISECT_TOL = 1e-4
SMOOTHING_STAGES = (1e-2, 1e-4, 1e-6)
STAGE_PATIENCE = 30
STAGE_STAG_FRAC = 0.05
INNER_MAX_CYCLES = 80
POLISH_MAX_CYCLES = 5000

STATUS_CONVERGED = "converged"
STATUS_ITER_LIMIT = "iter_limit"
STATUS_INFEASIBLE = "infeasible_detect"


@dataclass
class SolveConfig:
    value_tol: float = 1e-4
    feas_tol: float = FEAS_TOL
    max_iter: int = 2000
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        for name in ("value_tol", "feas_tol", "armijo_shrink", "armijo_slope"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter <= 0:
            raise ValueError("max_iter must be positive")


@dataclass
class SolveReport:
    value: float
    iterations: int
    final_feasibility: float
    grad_norm: float
    floored: bool
    status: str
    gap_bound: float = math.inf
    witness: TSetPoint | None = None
    objective_trace: list[float] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Lifted geometry on the partial-transpose side.
# ---------------------------------------------------------------------------


def _soft_threshold_budget(mags: np.ndarray, budget: float) -> np.ndarray:
    """Project magnitudes onto {sum <= budget} (simplex-style threshold)."""
    if mags.sum() <= budget:
        return mags
    s = np.sort(mags)[::-1]
    cum = np.cumsum(s)
    ks = np.arange(1, s.size + 1)
    theta = (cum - budget) / ks
    k = int(np.max(np.nonzero(s - theta > 0)[0])) + 1
    return np.maximum(mags - (cum[k - 1] - budget) / k, 0.0)


class LiftedProjector:
    """Dykstra projection machinery for the measures' feasible set.

    Points are stacks of shape (M, D, D), one Hermitian block per
    bipartition. Optional arguments select a general trace budget and a
    prescribed assembled operator (used by the log-negativity bisection).
    """

    def __init__(self, shape: PartyShape):
        self.shape = shape
        self.parts: list[Bipartition] = enumerate_bipartitions(shape.k)
        self.M = len(self.parts)
        self.D = shape.dim

    def assemble(self, x: np.ndarray) -> np.ndarray:
        tau = np.zeros((self.D, self.D), dtype=complex)
        for j, b in enumerate(self.parts):
            tau += partial_transpose(x[j], self.shape, b)
        return hermitian_part(tau)

    def pull_back(self, g_tau: np.ndarray) -> np.ndarray:
        """Gradient with respect to the blocks from a gradient in tau."""
        g = np.empty((self.M, self.D, self.D), dtype=complex)
        for j, b in enumerate(self.parts):
            g[j] = partial_transpose(g_tau, self.shape, b)
        return g

    def gap_bound(self, g_tau: np.ndarray, tau: np.ndarray) -> float:
        """Upper bound on f(x) - f*: the linear subproblem over the feasible
        set relaxes to a spectral norm over the bipartitions."""
        lin = float(np.real(np.vdot(g_tau, tau)))
        worst = 0.0
        for b in self.parts:
            w = np.linalg.eigvalsh(partial_transpose(g_tau, self.shape, b))
            worst = max(worst, float(np.abs(w).max()))
        return lin + worst

    def init_uniform(self) -> np.ndarray:
        x = np.zeros((self.M, self.D, self.D), dtype=complex)
        x[0] = np.eye(self.D) / self.D
        return x

    def init_trivial(self, rho: np.ndarray) -> tuple[np.ndarray, float]:
        """All weight on the bipartition with the smallest PT trace norm;
        returns the (rescaled-feasible) stack and that trace norm."""
        norms = [trace_norm(partial_transpose(rho, self.shape, b)) for b in self.parts]
        j = int(np.argmin(norms))
        x = np.zeros((self.M, self.D, self.D), dtype=complex)
        x[j] = partial_transpose(rho, self.shape, self.parts[j]) / norms[j]
        return x, norms[j]

    def _ball(self, x: np.ndarray, budget: float) -> np.ndarray:
        w, u = np.linalg.eigh(x)
        mags = _soft_threshold_budget(np.abs(w).ravel(), budget).reshape(w.shape)
        wn = np.sign(w) * mags
        out = np.einsum("...ij,...j,...kj->...ik", u, wn, u.conj())
        return (out + np.swapaxes(out, -1, -2).conj()) / 2

    def _pt_psd(self, x: np.ndarray) -> np.ndarray:
        pt = np.empty_like(x)
        for j, b in enumerate(self.parts):
            pt[j] = partial_transpose(x[j], self.shape, b)
        w, u = np.linalg.eigh(pt)
        neg = np.minimum(w, 0.0)
        delta = np.einsum("...ij,...j,...kj->...ik", u, -neg, u.conj())
        out = np.empty_like(x)
        for j, b in enumerate(self.parts):
            d = (delta[j] + delta[j].conj().T) / 2
            out[j] = x[j] + partial_transpose(d, self.shape, b)
        return out

    def max_residual(
        self, x: np.ndarray, budget: float = 1.0, target: np.ndarray | None = None
    ) -> float:
        # budget lives on the blocks themselves, positivity on their partial
        # transposes; the two spectra differ
        tn = float(np.abs(np.linalg.eigvalsh(x)).sum())
        r = tn - budget
        for j, b in enumerate(self.parts):
            w = np.linalg.eigvalsh(hermitian_part(partial_transpose(x[j], self.shape, b)))
            r = max(r, -float(w.min()))
        if target is not None:
            r = max(r, float(np.linalg.norm(self.assemble(x) - target)))
        return max(r, 0.0)

    def project(
        self,
        x: np.ndarray,
        budget: float = 1.0,
        target: np.ndarray | None = None,
        stop_tol: float = 1e-10,
        max_cycles: int = INNER_MAX_CYCLES,
        feas_tol: float | None = None,
    ) -> tuple[np.ndarray, int]:
        """Dykstra cycles until the per-cycle movement drops below stop_tol.

        In feasibility-oracle mode (feas_tol given) cycling also stops early
        once all residuals fall below feas_tol, or when movement stalls at a
        clearly infeasible residual.
        """
        x = np.array(x, dtype=complex)
        corr_ball = np.zeros_like(x)
        corr_psd = np.zeros_like(x)
        moves: list[float] = []
        cycle = 0
        for cycle in range(1, max_cycles + 1):
            moved = 0.0
            y = x + corr_ball
            xn = self._ball(y, budget)
            corr_ball = y - xn
            moved += float(np.linalg.norm(xn - x))
            x = xn
            if target is not None:
                resid = target - self.assemble(x)
                if np.linalg.norm(resid) > 0.0:
                    xn = x.copy()
                    for j, b in enumerate(self.parts):
                        xn[j] = x[j] + partial_transpose(resid, self.shape, b) / self.M
                    moved += float(np.linalg.norm(xn - x))
                    x = xn
            y = x + corr_psd
            xn = self._pt_psd(y)
            corr_psd = y - xn
            moved += float(np.linalg.norm(xn - x))
            x = xn
            if moved < stop_tol:
                break
            if feas_tol is not None:
                moves.append(moved)
                if cycle % 25 == 0 and self.max_residual(x, budget, target) <= feas_tol:
                    break
                if (
                    cycle >= 300
                    and cycle % 100 == 0
                    and moves[-1] > 0.6 * moves[-200]
                    and self.max_residual(x, budget, target) > 50 * feas_tol
                ):
                    break
        return x, cycle

    def to_tsetpoint(self, x: np.ndarray) -> TSetPoint:
        """Recover the split representation via Jordan-Hahn decompositions."""
        plus, minus = [], []
        for j in range(self.M):
            p, n = jordan_hahn(x[j])
            plus.append(p)
            minus.append(n)
        return TSetPoint.from_splits(self.shape, plus, minus)


# ---------------------------------------------------------------------------
# Divergence objectives, smoothed by a spectral shift delta.
# ---------------------------------------------------------------------------


def _log_divided_differences(wd: np.ndarray) -> np.ndarray:
    lw = np.log(wd)
    num = lw[:, None] - lw[None, :]
    den = wd[:, None] - wd[None, :]
    near = np.abs(den) < 1e-14 * np.maximum(wd[:, None], wd[None, :])
    return np.where(near, 1.0 / wd[:, None], num / np.where(den == 0.0, 1.0, den))


class _RelEntropyObjective:
    """f(tau) = Tr[rho log2 rho] - Tr[rho log2(tau + delta I)]."""

    def __init__(self, rho: np.ndarray, delta: float = EIG_FLOOR):
        self.rho = rho
        self.delta = delta
        w = np.linalg.eigvalsh(rho)
        w = w[w > 0.0]
        self.neg_entropy = float(np.sum(w * np.log2(w)))

    def _shifted(self, w: np.ndarray) -> np.ndarray:
        # outside the PSD cone (extrapolated points) the shift alone can go
        # negative; clamp at half the shift to keep logs finite
        return np.maximum(w + self.delta, 0.5 * self.delta)

    def value(self, tau: np.ndarray) -> float:
        w, u = np.linalg.eigh(hermitian_part(tau))
        wd = self._shifted(w)
        diag = np.einsum("ji,jk,ki->i", u.conj(), self.rho, u).real
        return self.neg_entropy - float(np.sum(diag * np.log2(wd)))

    def value_and_grad(self, tau: np.ndarray) -> tuple[float, np.ndarray, bool]:
        w, u = np.linalg.eigh(hermitian_part(tau))
        floored = bool(w.min() < EIG_FLOOR)
        wd = self._shifted(w)
        rho_t = u.conj().T @ self.rho @ u
        f = self.neg_entropy - float(np.sum(np.diag(rho_t).real * np.log2(wd)))
        g = u @ (rho_t * _log_divided_differences(wd)) @ u.conj().T / LN2
        return f, -hermitian_part(g), floored


class _SandwichedObjective:
    """f(tau) = sandwiched divergence of order alpha at tau + delta I."""

    def __init__(self, rho: np.ndarray, alpha: float, delta: float = EIG_FLOOR):
        self.rho = rho
        self.alpha = alpha
        self.s = (1.0 - alpha) / (2.0 * alpha)
        self.delta = delta

    def _half(self, tau: np.ndarray):
        w, u = np.linalg.eigh(hermitian_part(tau))
        wd = np.maximum(w + self.delta, 0.5 * self.delta)
        ws = wd**self.s
        half = (u * ws) @ u.conj().T
        return w, u, wd, ws, half

    def value(self, tau: np.ndarray) -> float:
        _, _, _, _, half = self._half(tau)
        gw = np.linalg.eigvalsh(hermitian_part(half @ self.rho @ half))
        total = float(np.sum(np.maximum(gw, 0.0) ** self.alpha))
        return math.log2(max(total, 1e-300)) / (self.alpha - 1.0)

    def value_and_grad(self, tau: np.ndarray) -> tuple[float, np.ndarray, bool]:
        alpha, s = self.alpha, self.s
        w, u, wd, ws, half = self._half(tau)
        floored = bool(w.min() < EIG_FLOOR)
        gmat = hermitian_part(half @ self.rho @ half)
        gw, gu = np.linalg.eigh(gmat)
        gw = np.maximum(gw, 0.0)
        total = float(np.sum(gw**alpha))
        f = math.log2(max(total, 1e-300)) / (alpha - 1.0)
        g_am1 = (gu * gw ** (alpha - 1.0)) @ gu.conj().T
        w_sens = self.rho @ half @ g_am1
        w_sens = w_sens + w_sens.conj().T
        # pull the sensitivity back through tau -> (tau + delta I)^s
        wt = u.conj().T @ w_sens @ u
        num = ws[:, None] - ws[None, :]
        den = wd[:, None] - wd[None, :]
        near = np.abs(den) < 1e-14 * np.maximum(wd[:, None], wd[None, :])
        dd = np.where(near, s * wd[:, None] ** (s - 1.0), num / np.where(den == 0.0, 1.0, den))
        g_tau = hermitian_part(u @ (wt * dd) @ u.conj().T)
        scale = alpha / ((alpha - 1.0) * LN2 * max(total, 1e-300))
        return f, scale * g_tau, floored


# ---------------------------------------------------------------------------
# Accelerated projected-gradient driver with smoothing continuation.
# ---------------------------------------------------------------------------


def _mfista_stage(
    proj,
    objective,
    final_objective,
    x: np.ndarray,
    f_final: float,
    cfg: SolveConfig,
    max_iter: int,
):
    """One smoothing stage of monotone FISTA.

    Momentum and curvature backtracking use the stage objective; acceptance
    of a new iterate and the stagnation window use the final objective, so
    the recorded objective sequence is nonincreasing across stages.
    Returns (x, f_final(x), accepted trace, iterations, converged-ish flag).
    """
    grow = 1.0 / cfg.armijo_shrink
    y = x.copy()
    x_prev = x.copy()
    t_mom = 1.0
    curvature = 1.0
    trace = [f_final]
    it = 0
    for it in range(1, max_iter + 1):
        # the extrapolated point can leave the PSD region where the
        # objective is meaningful; pull it back toward the monotone iterate
        for _ in range(20):
            if np.linalg.eigvalsh(proj.assemble(y)).min() > -1e-10:
                break
            y = 0.5 * (y + x)
        fy, gy_tau, _ = objective.value_and_grad(proj.assemble(y))
        gy = proj.pull_back(gy_tau)
        _, gx_tau, _ = final_objective.value_and_grad(proj.assemble(x))
        gap = proj.gap_bound(gx_tau, proj.assemble(x))
        if gap < 0.5 * cfg.value_tol:
            return x, trace[-1], trace, it, True
        if (
            len(trace) > STAGE_PATIENCE
            and trace[-STAGE_PATIENCE] - trace[-1]
            < STAGE_STAG_FRAC * cfg.value_tol * max(1.0, abs(trace[-1]))
        ):
            return x, trace[-1], trace, it, True
        fz = math.inf
        z = x
        for _ in range(60):
            z, _ = proj.project(y - gy / curvature)
            fz = objective.value(proj.assemble(z))
            dz = z - y
            quad = (
                fy
                + float(np.real(np.vdot(gy, dz)))
                + 0.5 * curvature * float(np.linalg.norm(dz)) ** 2
            )
            if fz <= quad + 1e-13 * max(1.0, abs(fz)):
                break
            curvature *= grow
        fz_final = final_objective.value(proj.assemble(z))
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t_mom * t_mom))
        if fz_final <= f_final:
            x_new, f_final = z, fz_final
        else:
            x_new = x
        y = x_new + (t_mom / t_new) * (z - x_new) + ((t_mom - 1.0) / t_new) * (x_new - x_prev)
        x_prev, x, t_mom = x_new, x_new, t_new
        trace.append(f_final)
        curvature = max(curvature * (1.0 - cfg.armijo_shrink), 1e-8)
    return x, f_final, trace, it, False


def _continuation_minimize(proj, make_objective, cfg: SolveConfig, starts) -> SolveReport:
    final_objective = make_objective(EIG_FLOOR)
    values = [final_objective.value(proj.assemble(s)) for s in starts]
    x = starts[int(np.argmin(values))]
    f_final = min(values)
    if f_final <= 0.0:
        # the state itself decomposes within budget: zero is the exact
        # minimum of a nonnegative measure
        x, _ = proj.project(x, stop_tol=1e-12, max_cycles=2000)
        tau = proj.assemble(x)
        value, g_tau, floored = final_objective.value_and_grad(tau)
        return SolveReport(
            value=value, iterations=0, final_feasibility=proj.max_residual(x),
            grad_norm=0.0, floored=floored, status=STATUS_CONVERGED,
            gap_bound=max(value, 0.0), witness=proj.to_tsetpoint(x),
            objective_trace=[value],
        )
    budget = cfg.max_iter
    total_it = 0
    trace: list[float] = []
    finished = True
    for i, delta in enumerate(SMOOTHING_STAGES):
        cap = max(40, budget // (len(SMOOTHING_STAGES) - i))
        x, f_final, stage_trace, its, finished = _mfista_stage(
            proj, make_objective(delta), final_objective, x, f_final, cfg, cap
        )
        trace.extend(stage_trace if not trace else stage_trace[1:])
        total_it += its
        budget -= its
        if budget <= 0:
            break
    x, _ = proj.project(x, stop_tol=1e-12, max_cycles=POLISH_MAX_CYCLES)
    tau = proj.assemble(x)
    value, g_tau, floored = final_objective.value_and_grad(tau)
    gap = proj.gap_bound(g_tau, tau)
    status = STATUS_CONVERGED if (finished or total_it < cfg.max_iter) else STATUS_ITER_LIMIT
    return SolveReport(
        value=value,
        iterations=total_it,
        final_feasibility=proj.max_residual(x),
        grad_norm=float(np.linalg.norm(g_tau)),
        floored=floored,
        status=status,
        gap_bound=gap,
        witness=proj.to_tsetpoint(x),
        objective_trace=trace,
    )


def gmre(rho: DensityMatrix, cfg: SolveConfig | None = None) -> SolveReport:
    """Minimize the quantum relative entropy over the lifted feasible set.

    The value is an upper estimate of the infimum (the divergence at the
    returned feasible witness); it is nonnegative up to numerics and
    vanishes on biseparable states.
    """
    cfg = cfg or SolveConfig()
    proj = LiftedProjector(rho.shape)
    starts = [proj.init_uniform(), proj.init_trivial(rho.matrix)[0]]
    return _continuation_minimize(
        proj, lambda d: _RelEntropyObjective(rho.matrix, delta=d), cfg, starts
    )


def renyi_rains(rho: DensityMatrix, alpha: float, cfg: SolveConfig | None = None) -> SolveReport:
    """Minimize the sandwiched Renyi divergence of order alpha in (1, 2]."""
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (1, 2], got {alpha!r}")
    cfg = cfg or SolveConfig()
    proj = LiftedProjector(rho.shape)
    starts = [proj.init_uniform(), proj.init_trivial(rho.matrix)[0]]
    return _continuation_minimize(
        proj, lambda d: _SandwichedObjective(rho.matrix, alpha, delta=d), cfg, starts
    )


def gmn_from_log(e_n: float) -> float:
    """Invert E_N = log2(2N + 1) to recover the negativity N."""
    if e_n < 0.0:
        raise ValueError(f"log-negativity must be nonnegative, got {e_n!r}")
    return (2.0**e_n - 1.0) / 2.0


def log_gmn(rho: DensityMatrix, cfg: SolveConfig | None = None) -> SolveReport:
    """Genuine multipartite log-negativity via bisection on the trace budget.

    Computes log2 of the smallest budget b admitting a lifted decomposition
    that assembles to the state itself; zero exactly for PPT mixtures. Each
    probe is a Dykstra feasibility run, and the returned witness certifies
    the final (feasible) budget.

    The value is always a certified upper bound. Alternating projections
    cannot prove infeasibility, so budgets just above the optimum whose
    feasible slivers converge too slowly are counted as infeasible; on
    ill-conditioned states this inflates the bound by up to a few times
    1e-2 bits (anchor states are exact because their interior probes are
    genuinely infeasible).
    """
    cfg = cfg or SolveConfig()
    proj = LiftedProjector(rho.shape)
    x_hi, b_hi = proj.init_trivial(rho.matrix)
    x_hi = x_hi * b_hi  # unscaled: assembles to rho itself
    total_cycles = 0

    def probe(b: float, x0: np.ndarray) -> tuple[bool, np.ndarray, int]:
        x, cycles = proj.project(
            x0, budget=b, target=rho.matrix,
            stop_tol=cfg.feas_tol * 1e-3, max_cycles=cfg.max_iter,
            feas_tol=cfg.feas_tol,
        )
        return proj.max_residual(x, b, rho.matrix) <= cfg.feas_tol, x, cycles

    if b_hi <= 1.0 + cfg.feas_tol:
        return SolveReport(
            value=0.0, iterations=0,
            final_feasibility=proj.max_residual(x_hi, 1.0 + cfg.feas_tol, rho.matrix),
            grad_norm=0.0, floored=False, status=STATUS_CONVERGED, gap_bound=0.0,
            witness=proj.to_tsetpoint(x_hi),
        )
    ok, x, cycles = probe(1.0, x_hi)
    total_cycles += cycles
    if ok:
        return SolveReport(
            value=0.0, iterations=total_cycles,
            final_feasibility=proj.max_residual(x, 1.0, rho.matrix),
            grad_norm=0.0, floored=False, status=STATUS_CONVERGED, gap_bound=0.0,
            witness=proj.to_tsetpoint(x),
        )
    lo, hi = 1.0, b_hi
    x_best = x_hi
    while hi - lo > GMN_BISECT_TOL:
        mid = 0.5 * (lo + hi)
        ok, x, cycles = probe(mid, x_best)
        total_cycles += cycles
        if ok:
            hi, x_best = mid, x
        else:
            lo = mid
    if not hi > lo:
        return SolveReport(
            value=math.log2(b_hi), iterations=total_cycles, final_feasibility=math.inf,
            grad_norm=0.0, floored=False, status=STATUS_INFEASIBLE, gap_bound=math.inf,
        )
    return SolveReport(
        value=math.log2(hi), iterations=total_cycles,
        final_feasibility=proj.max_residual(x_best, hi, rho.matrix),
        grad_norm=0.0, floored=False, status=STATUS_CONVERGED, gap_bound=0.0,
        witness=proj.to_tsetpoint(x_best),
    )


# ---------------------------------------------------------------------------
# Alternate measure over the smaller per-bipartition trace-norm set.
# ---------------------------------------------------------------------------


class _AltProjector:
    """Dykstra machinery for {sigma >= 0 : ||T_m(sigma)||_1 <= 1 for all m}.

    Stack layout (1 + 2M, D, D): row 0 is sigma, rows 1..M positive split
    parts of its partial transposes, rows M+1..2M the negative parts. The
    couplings T_m(sigma) = plus_m - minus_m are affine; the per-bipartition
    budgets Tr[plus_m + minus_m] <= 1 are halfspaces.
    """

    def __init__(self, shape: PartyShape):
        self.shape = shape
        self.parts = enumerate_bipartitions(shape.k)
        self.M = len(self.parts)
        self.D = shape.dim
        self._eye = np.eye(self.D)

    def init_stack(self) -> np.ndarray:
        x = np.zeros((1 + 2 * self.M, self.D, self.D), dtype=complex)
        x[0] = self._eye / self.D
        for j in range(self.M):
            x[1 + j] = self._eye / self.D
        return x

    def assemble(self, x: np.ndarray) -> np.ndarray:
        return hermitian_part(x[0])

    def pull_back(self, g_sigma: np.ndarray) -> np.ndarray:
        g = np.zeros((1 + 2 * self.M, self.D, self.D), dtype=complex)
        g[0] = g_sigma
        return g

    def gap_bound(self, g_sigma: np.ndarray, sigma: np.ndarray) -> float:
        """For the smaller set, <g, z> >= -min_m ||T_m(g)||_inf on members."""
        lin = float(np.real(np.vdot(g_sigma, sigma)))
        best = math.inf
        for b in self.parts:
            w = np.linalg.eigvalsh(partial_transpose(g_sigma, self.shape, b))
            best = min(best, float(np.abs(w).max()))
        return lin + best

    def max_residual(self, x: np.ndarray) -> float:
        r = float(max(0.0, -np.linalg.eigvalsh(x).min()))
        for j, b in enumerate(self.parts):
            r = max(r, float(np.trace(x[1 + j] + x[1 + self.M + j]).real) - 1.0)
            gap = partial_transpose(x[0], self.shape, b) - (x[1 + j] - x[1 + self.M + j])
            r = max(r, float(np.linalg.norm(gap)))
        return r

    def to_tsetpoint(self, x: np.ndarray) -> None:
        return None

    def project(
        self,
        x: np.ndarray,
        stop_tol: float = 1e-10,
        max_cycles: int = INNER_MAX_CYCLES,
    ):
        from .linalg import psd_project_batch

        m_count, d = self.M, self.D
        x = np.array(x, dtype=complex)
        corr_psd = np.zeros_like(x)
        corr_budget = np.zeros((m_count, 2, d, d), dtype=complex)
        cycle = 0
        for cycle in range(1, max_cycles + 1):
            moved = 0.0
            y = x + corr_psd
            xn = psd_project_batch(y)
            corr_psd = y - xn
            moved += float(np.linalg.norm(xn - x))
            x = xn
            for j, b in enumerate(self.parts):
                gap = partial_transpose(x[0], self.shape, b) - (x[1 + j] - x[1 + m_count + j])
                if np.linalg.norm(gap) > 0.0:
                    c = gap / 3.0
                    x0n = x[0] - partial_transpose(c, self.shape, b)
                    moved += float(np.linalg.norm(x0n - x[0])) + math.sqrt(2.0) * float(
                        np.linalg.norm(c)
                    )
                    x[0] = x0n
                    x[1 + j] = x[1 + j] + c
                    x[1 + m_count + j] = x[1 + m_count + j] - c
                yp = x[1 + j] + corr_budget[j, 0]
                yn = x[1 + m_count + j] + corr_budget[j, 1]
                excess = float(np.trace(yp + yn).real) - 1.0
                if excess > 0.0:
                    shift = (excess / (2 * d)) * self._eye
                    pn, nn = yp - shift, yn - shift
                else:
                    pn, nn = yp, yn
                corr_budget[j, 0] = yp - pn
                corr_budget[j, 1] = yn - nn
                moved += float(
                    np.linalg.norm(pn - x[1 + j]) + np.linalg.norm(nn - x[1 + m_count + j])
                )
                x[1 + j] = pn
                x[1 + m_count + j] = nn
            if moved < stop_tol:
                break
        return x, cycle


def alt_rains(rho: DensityMatrix, cfg: SolveConfig | None = None) -> SolveReport:
    """Minimize the relative entropy over the per-bipartition trace-norm set
    (an upper bound on the main measure, since that set is smaller)."""
    cfg = cfg or SolveConfig()
    proj = _AltProjector(rho.shape)
    starts = [proj.init_stack()]
    # when the state itself is a member, sigma = rho is optimal
    worst = max(
        trace_norm(partial_transpose(rho.matrix, rho.shape, b))
        for b in enumerate_bipartitions(rho.shape.k)
    )
    if worst <= 1.0:
        x = proj.init_stack()
        x[0] = rho.matrix
        for j, b in enumerate(proj.parts):
            p, n = jordan_hahn(partial_transpose(rho.matrix, rho.shape, b))
            x[1 + j] = p
            x[1 + proj.M + j] = n
        starts.append(x)
    return _continuation_minimize(
        proj, lambda d: _RelEntropyObjective(rho.matrix, delta=d), cfg, starts
    )
