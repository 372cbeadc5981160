"""The feasible set of the entanglement measures and its projection machinery.

A point is stored in lifted form: per bipartition m it carries a component
tau_m together with a positive/negative split (plus_m, minus_m) of the
partially transposed component, i.e. T_m(tau_m) = plus_m - minus_m. The set
membership conditions are

    plus_m, minus_m >= 0,   tau_m = T_m(plus_m - minus_m) >= 0,
    sum_m Tr[plus_m + minus_m] <= 1,

and the trace budget upper-bounds the summed trace norms of the partial
transposes (with equality exactly for Jordan-Hahn splits), which makes the
set a faithful lifted description of the measure's feasible region.

Projections are computed by Dykstra's alternating method; every cycle uses
only closed-form pieces (eigenvalue clipping, a uniform identity shift for
the trace budget, and a scaled-adjoint correction for the coupling between
a split and its component).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import hermitian_part, psd_project, psd_project_batch, trace_norm
from .states import Bipartition, PartyShape, enumerate_bipartitions, partial_transpose

FEAS_TOL = 1e-8
DYKSTRA_MAX_ITER = 5000


@dataclass
class TSetPoint:
    """Lifted decomposition variables, one (tau, plus, minus) triple per bipartition."""

    shape: PartyShape
    taus: list[np.ndarray]
    plus: list[np.ndarray]
    minus: list[np.ndarray]

    def __post_init__(self):
        m = len(enumerate_bipartitions(self.shape.k))
        if not (len(self.taus) == len(self.plus) == len(self.minus) == m):
            raise ValueError(
                f"expected {m} blocks per field for k={self.shape.k} parties"
            )
        d = self.shape.dim
        for name in ("taus", "plus", "minus"):
            for blk in getattr(self, name):
                if blk.shape != (d, d):
                    raise ValueError(f"{name} block has shape {blk.shape}, expected {(d, d)}")

    @classmethod
    def from_splits(cls, shape: PartyShape, plus: list[np.ndarray], minus: list[np.ndarray]) -> "TSetPoint":
        """Build a point whose components are derived from the splits."""
        parts = enumerate_bipartitions(shape.k)
        taus = [partial_transpose(p - n, shape, b) for p, n, b in zip(plus, minus, parts)]
        return cls(shape, taus, [p.copy() for p in plus], [n.copy() for n in minus])

    @property
    def bipartitions(self) -> list[Bipartition]:
        return enumerate_bipartitions(self.shape.k)

    @property
    def budget(self) -> float:
        return float(sum(np.trace(p + n).real for p, n in zip(self.plus, self.minus)))


@dataclass
class MembershipReport:
    feasible: bool
    psd_residuals: dict[str, list[float]]
    budget: float
    equality_residual: float
    tol: float

    @property
    def max_psd_residual(self) -> float:
        return max(max(v) for v in self.psd_residuals.values())


def assemble(pt: TSetPoint) -> np.ndarray:
    """Sum of the per-bipartition components."""
    out = np.zeros((pt.shape.dim, pt.shape.dim), dtype=complex)
    for t in pt.taus:
        out = out + t
    return hermitian_part(out)


def jordan_hahn(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian matrix into orthogonally supported PSD parts.

    Returns (plus, minus) with m = plus - minus and
    Tr[plus + minus] = ||m||_1.
    """
    w, u = np.linalg.eigh(hermitian_part(np.asarray(m, dtype=complex)))
    plus = (u * np.maximum(w, 0.0)) @ u.conj().T
    minus = (u * np.maximum(-w, 0.0)) @ u.conj().T
    return hermitian_part(plus), hermitian_part(minus)


def _neg_part(w: np.ndarray) -> float:
    return float(max(0.0, -w.min()))


def t_membership(pt: TSetPoint, tol: float = FEAS_TOL) -> MembershipReport:
    """Check the lifted membership conditions at the given tolerance."""
    parts = pt.bipartitions
    res = {"tau": [], "plus": [], "minus": []}
    eq = 0.0
    for t, p, n, b in zip(pt.taus, pt.plus, pt.minus, parts):
        res["tau"].append(_neg_part(np.linalg.eigvalsh(hermitian_part(t))))
        res["plus"].append(_neg_part(np.linalg.eigvalsh(hermitian_part(p))))
        res["minus"].append(_neg_part(np.linalg.eigvalsh(hermitian_part(n))))
        eq = max(eq, float(np.linalg.norm(partial_transpose(t, pt.shape, b) - (p - n))))
    budget = pt.budget
    feasible = (
        max(max(v) for v in res.values()) <= tol
        and eq <= tol
        and budget <= 1.0 + tol
    )
    return MembershipReport(feasible, res, budget, eq, tol)


def tprime_membership(sigma: np.ndarray, shape: PartyShape, tol: float = FEAS_TOL) -> MembershipReport:
    """Membership in the smaller set requiring every PT trace norm <= 1.

    The budget field reports the largest per-bipartition trace norm. Any
    member embeds into the lifted set via a single-bipartition point.
    """
    sigma = hermitian_part(np.asarray(sigma, dtype=complex))
    psd = _neg_part(np.linalg.eigvalsh(sigma))
    worst = 0.0
    norms = []
    for b in enumerate_bipartitions(shape.k):
        tn = trace_norm(partial_transpose(sigma, shape, b))
        norms.append(tn)
        worst = max(worst, tn)
    feasible = psd <= tol and worst <= 1.0 + tol
    return MembershipReport(feasible, {"sigma": [psd], "pt_norms": norms}, worst, 0.0, tol)


def feasible_init(shape: PartyShape) -> TSetPoint:
    """Strictly feasible full-rank start: the maximally mixed state on the
    first bipartition, split exactly (budget exactly 1)."""
    parts = enumerate_bipartitions(shape.k)
    d = shape.dim
    zero = np.zeros((d, d), dtype=complex)
    plus = [zero.copy() for _ in parts]
    minus = [zero.copy() for _ in parts]
    plus[0] = np.eye(d, dtype=complex) / d
    return TSetPoint.from_splits(shape, plus, minus)


def random_feasible_point(shape: PartyShape, seed: int) -> TSetPoint:
    """Random feasible point: random PSD components with Jordan-Hahn splits,
    rescaled so the trace budget is exactly 1."""
    rng = np.random.default_rng(seed)
    parts = enumerate_bipartitions(shape.k)
    d = shape.dim
    comps = []
    norms = []
    for b in parts:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        w = g @ g.conj().T
        w /= np.trace(w).real
        w *= rng.uniform(0.2, 1.0)
        comps.append(w)
        norms.append(trace_norm(partial_transpose(w, shape, b)))
    scale = sum(norms)
    plus, minus = [], []
    for w, b in zip(comps, parts):
        p, n = jordan_hahn(partial_transpose(w, shape, b) / scale)
        plus.append(p)
        minus.append(n)
    return TSetPoint.from_splits(shape, plus, minus)


# ---------------------------------------------------------------------------
# Dykstra machinery on stacked split variables.
# A stack has shape (2M, D, D): rows 0..M-1 are plus blocks, M..2M-1 minus.
# ---------------------------------------------------------------------------


@dataclass
class ProjectionResult:
    point: TSetPoint
    converged: bool
    cycles: int
    residual: float
    residual_trace: list[float] = field(default_factory=list)


class TSetProjector:
    """Dykstra projection onto the lifted feasible set (optionally with a
    prescribed assembled operator and a general trace budget)."""

    def __init__(self, shape: PartyShape):
        self.shape = shape
        self.parts = enumerate_bipartitions(shape.k)
        self.M = len(self.parts)
        self.D = shape.dim
        self._eye = np.eye(self.D)

    # -- stack helpers ------------------------------------------------------

    def pack(self, pt: TSetPoint) -> np.ndarray:
        x = np.empty((2 * self.M, self.D, self.D), dtype=complex)
        for j in range(self.M):
            x[j] = pt.plus[j]
            x[self.M + j] = pt.minus[j]
        return x

    def unpack(self, x: np.ndarray) -> TSetPoint:
        plus = [x[j] for j in range(self.M)]
        minus = [x[self.M + j] for j in range(self.M)]
        return TSetPoint.from_splits(self.shape, plus, minus)

    def assemble_stack(self, x: np.ndarray) -> np.ndarray:
        tau = np.zeros((self.D, self.D), dtype=complex)
        for j, b in enumerate(self.parts):
            tau += partial_transpose(x[j] - x[self.M + j], self.shape, b)
        return hermitian_part(tau)

    def zero_stack(self) -> np.ndarray:
        return np.zeros((2 * self.M, self.D, self.D), dtype=complex)

    # -- residuals ----------------------------------------------------------

    def max_residual(self, x: np.ndarray, budget: float = 1.0,
                     target: np.ndarray | None = None) -> float:
        r = _neg_part(np.linalg.eigvalsh(x).ravel())
        r = max(r, float(np.trace(x, axis1=1, axis2=2).sum().real) - budget)
        for j, b in enumerate(self.parts):
            w = partial_transpose(x[j] - x[self.M + j], self.shape, b)
            r = max(r, _neg_part(np.linalg.eigvalsh(hermitian_part(w))))
        if target is not None:
            r = max(r, float(np.linalg.norm(self.assemble_stack(x) - target)))
        return r

    # -- projection ---------------------------------------------------------

    def project(
        self,
        x: np.ndarray,
        budget: float = 1.0,
        target: np.ndarray | None = None,
        stop_tol: float = 1e-10,
        max_cycles: int = DYKSTRA_MAX_ITER,
        feas_tol: float | None = None,
    ) -> tuple[np.ndarray, int, float]:
        """Dykstra cycles until the per-cycle movement drops below stop_tol.

        If feas_tol is given, cycling also stops as soon as all residuals
        fall below it (feasibility-oracle mode; the returned point is then
        feasible but not necessarily the distance-minimizing projection).
        Returns (point, cycles, last movement).
        """
        M, D = self.M, self.D
        x = np.array(x, dtype=complex)
        corr_psd = np.zeros_like(x)
        corr_budget = np.zeros_like(x)
        corr_coup = [np.zeros_like(x[0]) for _ in range(M)]
        moved = np.inf
        cycle = 0
        for cycle in range(1, max_cycles + 1):
            moved = 0.0
            # PSD cone on every split block
            y = x + corr_psd
            xn = psd_project_batch(y)
            corr_psd = y - xn
            moved += float(np.linalg.norm(xn - x))
            x = xn
            # trace-budget halfspace: uniform identity shift
            y = x + corr_budget
            s = float(np.trace(y, axis1=1, axis2=2).sum().real) - budget
            if s > 0.0:
                xn = y - (s / (2 * M * D)) * self._eye
            else:
                xn = y
            corr_budget = y - xn
            moved += float(np.linalg.norm(xn - x))
            x = xn
            # prescribed assembled operator (affine; no correction needed)
            if target is not None:
                resid = target - self.assemble_stack(x)
                if np.linalg.norm(resid) > 0.0:
                    xn = x.copy()
                    for j, b in enumerate(self.parts):
                        c = partial_transpose(resid, self.shape, b) / (2 * M)
                        xn[j] = x[j] + c
                        xn[M + j] = x[M + j] - c
                    moved += float(np.linalg.norm(xn - x))
                    x = xn
            # coupling T_m(plus - minus) >= 0: preimage of the PSD cone under
            # an orthogonal involution, scaled-adjoint correction factor 1/2
            for j, b in enumerate(self.parts):
                yp = x[j] + corr_coup[j]
                yn = x[M + j] - corr_coup[j]
                w = partial_transpose(yp - yn, self.shape, b)
                delta = psd_project(w) - w
                c = 0.5 * partial_transpose(delta, self.shape, b)
                corr_coup[j] = -c
                moved += float(np.sqrt(2.0) * np.linalg.norm(x[j] - (yp + c)))
                x[j] = yp + c
                x[M + j] = yn - c
            if moved < stop_tol:
                break
            if feas_tol is not None and cycle % 25 == 0:
                if self.max_residual(x, budget, target) <= feas_tol:
                    break
        return x, cycle, moved


def dykstra_project(
    pt: TSetPoint,
    tol: float = FEAS_TOL,
    max_iter: int = DYKSTRA_MAX_ITER,
) -> ProjectionResult:
    """Frobenius-project arbitrary lifted data onto the feasible set.

    The components of the result are rebuilt from the projected splits, so
    the returned point always satisfies the split/component equality exactly;
    stale tau fields on the input are ignored.
    """
    proj = TSetProjector(pt.shape)
    x, cycles, moved = proj.project(proj.pack(pt), stop_tol=tol * 1e-2, max_cycles=max_iter)
    out = proj.unpack(x)
    residual = proj.max_residual(x)
    return ProjectionResult(
        point=out,
        converged=residual <= tol,
        cycles=cycles,
        residual=residual,
        residual_trace=[moved],
    )
