"""Selective multipartite operations and the checks that certify them.

A selective operation is a finite family of completely positive branch maps
whose sum is trace preserving. The certification checks three conditions:
each branch is CP, each branch conjugated by every bipartition's partial
transpose stays CP, and the branch sum is trace preserving. Branches are
stored in (optionally signed) Kraus form; Choi matrices are built on demand
for the CP checks, so non-CP test maps can be expressed too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_part
from .states import (
    DensityMatrix,
    PartyShape,
    enumerate_bipartitions,
    partial_transpose,
)

BRANCH_PROB_FLOOR = 1e-12


@dataclass
class BranchMap:
    """One branch: X -> sum_i c_i K_i X K_i^dag with real coefficients.

    Plain Kraus form has all coefficients equal to one; signed coefficients
    admit Hermiticity-preserving maps that are not CP (used to exercise the
    failure modes of the certification checks).
    """

    kraus_ops: list[np.ndarray]
    coeffs: list[float] | None = None

    def __post_init__(self):
        self.kraus_ops = [np.asarray(k, dtype=complex) for k in self.kraus_ops]
        if not self.kraus_ops:
            raise ValueError("a branch needs at least one Kraus operator")
        if self.coeffs is None:
            self.coeffs = [1.0] * len(self.kraus_ops)
        if len(self.coeffs) != len(self.kraus_ops):
            raise ValueError("one coefficient per Kraus operator")
        dout, din = self.kraus_ops[0].shape
        for k in self.kraus_ops:
            if k.shape != (dout, din):
                raise ValueError("inconsistent Kraus operator shapes in a branch")

    @property
    def din(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def dout(self) -> int:
        return self.kraus_ops[0].shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros((self.dout, self.dout), dtype=complex)
        for c, k in zip(self.coeffs, self.kraus_ops):
            out += c * (k @ x @ k.conj().T)
        return out

    def tp_sum(self) -> np.ndarray:
        return sum(c * (k.conj().T @ k) for c, k in zip(self.coeffs, self.kraus_ops))


@dataclass
class SelectiveOperation:
    """A finite family of branch maps with declared in/out party shapes."""

    branches: list[BranchMap]
    in_shape: PartyShape
    out_shape: PartyShape | None = None

    def __post_init__(self):
        if self.out_shape is None:
            self.out_shape = self.in_shape
        if not self.branches:
            raise ValueError("need at least one branch")
        if self.in_shape.k != self.out_shape.k:
            raise ValueError("input and output party counts must match")
        for br in self.branches:
            if br.din != self.in_shape.dim or br.dout != self.out_shape.dim:
                raise ValueError("branch dimensions inconsistent with declared shapes")

    def tp_deviation(self) -> float:
        s = sum(br.tp_sum() for br in self.branches)
        return float(np.abs(s - np.eye(self.in_shape.dim)).max())


def choi_matrix(apply_fn, din: int, dout: int) -> np.ndarray:
    """Choi matrix sum_ij |i><j| (x) Phi(|i><j|) built from matrix units."""
    j = np.zeros((din * dout, din * dout), dtype=complex)
    for a in range(din):
        for b in range(din):
            e = np.zeros((din, din), dtype=complex)
            e[a, b] = 1.0
            out = apply_fn(e)
            j[a * dout:(a + 1) * dout, b * dout:(b + 1) * dout] = out
    return j


@dataclass
class SelectivePPTReport:
    """Per-condition residuals; a condition passes when its residual <= tol."""

    cp_residuals: list[float]
    ppt_cp_residuals: dict[tuple[int, int], float]
    tp_residual: float
    tol: float

    @property
    def cp_ok(self) -> bool:
        return max(self.cp_residuals) <= self.tol

    @property
    def ppt_cp_ok(self) -> bool:
        return max(self.ppt_cp_residuals.values()) <= self.tol

    @property
    def tp_ok(self) -> bool:
        return self.tp_residual <= self.tol

    @property
    def passes(self) -> bool:
        return self.cp_ok and self.ppt_cp_ok and self.tp_ok


def is_selective_ppt(op: SelectiveOperation, tol: float = 1e-8) -> SelectivePPTReport:
    """Certify the three conditions of a selective multipartite operation."""
    cp_res = []
    ppt_res: dict[tuple[int, int], float] = {}
    parts_in = enumerate_bipartitions(op.in_shape.k)
    parts_out = enumerate_bipartitions(op.out_shape.k)
    for x, br in enumerate(op.branches):
        j = choi_matrix(br.apply, br.din, br.dout)
        w = np.linalg.eigvalsh(hermitian_part(j))
        cp_res.append(float(max(0.0, -w.min())))
        for m, (b_in, b_out) in enumerate(zip(parts_in, parts_out)):

            def conjugated(e: np.ndarray) -> np.ndarray:
                inner = partial_transpose(e, op.in_shape, b_in)
                return partial_transpose(br.apply(inner), op.out_shape, b_out)

            jm = choi_matrix(conjugated, br.din, br.dout)
            wm = np.linalg.eigvalsh(hermitian_part(jm))
            ppt_res[(x, m)] = float(max(0.0, -wm.min()))
    return SelectivePPTReport(cp_res, ppt_res, op.tp_deviation(), tol)


def apply_selective(
    op: SelectiveOperation, rho: DensityMatrix
) -> list[tuple[float, DensityMatrix]]:
    """Apply every branch; returns (probability, normalized state) pairs.

    Branches with probability at most the floor are dropped; the remaining
    probabilities sum to one within numerical tolerance.
    """
    dev = op.tp_deviation()
    if dev > 1e-8:
        raise ValueError(f"branch sum is not trace preserving (deviation {dev:.3e})")
    out = []
    for br in op.branches:
        m = hermitian_part(br.apply(rho.matrix))
        p = float(np.trace(m).real)
        if p <= BRANCH_PROB_FLOOR:
            continue
        out.append((p, DensityMatrix(op.out_shape, m / p)))
    return out


def local_instrument(
    shape: PartyShape, party: int, seed: int
) -> SelectiveOperation:
    """Haar-random local unitary followed by a computational-basis measurement
    on one party; a selective local operation, hence inside the certified class."""
    if not 0 <= party < shape.k:
        raise ValueError(f"party {party} out of range for k={shape.k}")
    rng = np.random.default_rng(seed)
    d = shape.dims[party]
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    u = q * (np.diag(r) / np.abs(np.diag(r)))
    left = int(np.prod(shape.dims[:party], initial=1))
    right = int(np.prod(shape.dims[party + 1:], initial=1))
    branches = []
    for k in range(d):
        proj = np.zeros((d, d), dtype=complex)
        proj[k, :] = u[k, :]
        kraus = np.kron(np.kron(np.eye(left), proj), np.eye(right))
        branches.append(BranchMap([kraus]))
    return SelectiveOperation(branches, shape)


def random_ppt_mixture(
    shape: PartyShape, seed: int, n_products: int = 3
) -> tuple[list[float], list[np.ndarray], DensityMatrix]:
    """A random mixture with an explicit decomposition: one component per
    bipartition, each a mixture of product states across that split (hence
    positive under that split's partial transpose).

    Returns (weights, components, mixed state).
    """
    rng = np.random.default_rng(seed)
    parts = enumerate_bipartitions(shape.k)
    weights = rng.dirichlet(np.ones(len(parts)))
    comps = []
    for b in parts:
        block = sorted(b.block)
        rest = [i for i in range(shape.k) if i not in b.block]
        d_a = int(np.prod([shape.dims[i] for i in block]))
        d_b = int(np.prod([shape.dims[i] for i in rest]))
        comp = np.zeros((shape.dim, shape.dim), dtype=complex)
        for _ in range(n_products):
            va = rng.standard_normal(d_a) + 1j * rng.standard_normal(d_a)
            vb = rng.standard_normal(d_b) + 1j * rng.standard_normal(d_b)
            va /= np.linalg.norm(va)
            vb /= np.linalg.norm(vb)
            v = _embed_product(va, vb, block, rest, shape)
            comp += np.outer(v, v.conj()) / n_products
        comps.append(hermitian_part(comp))
    mixed = sum(w * c for w, c in zip(weights, comps))
    mixed = hermitian_part(mixed)
    mixed /= np.trace(mixed).real
    return list(map(float, weights)), comps, DensityMatrix(shape, mixed)


def _embed_product(
    va: np.ndarray, vb: np.ndarray, block: list[int], rest: list[int], shape: PartyShape
) -> np.ndarray:
    """Tensor two block vectors into the full party ordering."""
    t = np.tensordot(
        va.reshape([shape.dims[i] for i in block]),
        vb.reshape([shape.dims[i] for i in rest]),
        axes=0,
    )
    order = block + rest
    perm = [order.index(i) for i in range(shape.k)]
    return np.transpose(t, perm).reshape(shape.dim)
