"""Transverse-field Ising chains: ground states, three-site reduced states,
and entanglement sweeps versus the field strength.

The chain Hamiltonian is -sum_i (sx_i sx_{i+1} + h sz_i) with unit coupling;
it has a quantum phase transition at h = 1. Finite chains are diagonalized
exactly (sparse extremal eigensolver); below the transition the ground
doublet is quasi-degenerate and the even spin-flip-parity member is
selected, which is the symmetric continuation of the h -> 1- ground state.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .linalg import hermitian_part
from .solver import SolveConfig, gmre, log_gmn
from .states import DensityMatrix, PartyShape

MAX_SITES = 14


class GroundStateError(RuntimeError):
    """Eigensolver failed to converge; carries the residual norm."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"ground-state eigensolver did not converge (residual {residual:.3e})")


@dataclass
class ChainConfig:
    n_sites: int = 12
    h: float = 1.0
    boundary: str = "periodic"

    def __post_init__(self):
        if self.n_sites < 4:
            raise ValueError(f"need at least 4 sites, got {self.n_sites}")
        if self.n_sites % 2 != 0:
            raise ValueError(f"site count must be even, got {self.n_sites}")
        if self.n_sites > MAX_SITES:
            raise ValueError(f"at most {MAX_SITES} sites supported, got {self.n_sites}")
        if self.h < 0:
            raise ValueError(f"field strength must be nonnegative, got {self.h}")
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"boundary must be 'periodic' or 'open', got {self.boundary!r}")


@dataclass
class SweepSpec:
    h_values: list[float]
    sites: tuple[int, int, int] | None = None
    measures: tuple[str, ...] = ("gmre", "log_gmn")

    def __post_init__(self):
        if not self.h_values:
            raise ValueError("h grid must be nonempty")
        if any(h < 0 for h in self.h_values):
            raise ValueError("h grid must be nonnegative")
        bad = set(self.measures) - {"gmre", "log_gmn"}
        if bad:
            raise ValueError(f"unknown measures {sorted(bad)}")


def build_hamiltonian(chain: ChainConfig) -> sp.csr_matrix:
    """Sparse Hamiltonian in the computational z basis.

    Site i occupies bit (n-1-i), i.e. site 0 is the most significant index,
    matching the party ordering used everywhere else.
    """
    n = chain.n_sites
    dim = 1 << n
    states = np.arange(dim)
    # field term: sz eigenvalue +1 for bit 0, -1 for bit 1
    diag = np.zeros(dim)
    for i in range(n):
        bit = (states >> (n - 1 - i)) & 1
        diag -= chain.h * (1.0 - 2.0 * bit)
    n_bonds = n if chain.boundary == "periodic" else n - 1
    rows = []
    for i in range(n_bonds):
        j = (i + 1) % n
        flipped = states ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j))
        rows.append(flipped)
    row_idx = np.concatenate(rows)
    col_idx = np.tile(states, n_bonds)
    vals = -np.ones(n_bonds * dim)
    ham = sp.coo_matrix((vals, (row_idx, col_idx)), shape=(dim, dim)).tocsr()
    ham += sp.diags(diag)
    return ham


def _parity_diagonal(n: int) -> np.ndarray:
    states = np.arange(1 << n)
    pop = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        pop += (states >> i) & 1
    return 1.0 - 2.0 * (pop % 2)


def ground_state(chain: ChainConfig) -> tuple[float, np.ndarray]:
    """Lowest even-parity eigenpair of the chain Hamiltonian.

    In the quasi-degenerate regime the two lowest states are rotated into
    spin-flip-parity eigenstates and the even one is returned.
    """
    ham = build_hamiltonian(chain)
    dim = ham.shape[0]
    if dim <= 64:
        w, v = np.linalg.eigh(ham.toarray())
        w, v = w[:2], v[:, :2]
    else:
        try:
            w, v = spla.eigsh(ham, k=2, which="SA")
        except spla.ArpackNoConvergence as e:
            if e.eigenvalues.size:
                vec = e.eigenvectors[:, 0]
                res = float(np.linalg.norm(ham @ vec - e.eigenvalues[0] * vec))
            else:
                res = float("inf")
            raise GroundStateError(res) from e
        order = np.argsort(w)
        w, v = w[order], v[:, order]
    par = _parity_diagonal(chain.n_sites)
    overlap = v.T @ (par[:, None] * v)
    pw, pv = np.linalg.eigh((overlap + overlap.T) / 2)
    best: tuple[float, np.ndarray] | None = None
    for idx in range(2):
        vec = v @ pv[:, idx]
        vec /= np.linalg.norm(vec)
        parity = float(vec @ (par * vec))
        if parity < 0.5:
            continue
        energy = float(vec @ (ham @ vec))
        if best is None or energy < best[0]:
            best = (energy, vec)
    if best is None:
        # both low states odd (cannot happen for this model; defensive)
        raise GroundStateError(float("nan"))
    return best


def three_site_rdm(
    vector: np.ndarray, n_sites: int, sites: tuple[int, int, int]
) -> DensityMatrix:
    """Reduced state of three adjacent spins (adjacency modulo the boundary)."""
    s0, s1, s2 = sites
    if s1 != (s0 + 1) % n_sites or s2 != (s0 + 2) % n_sites:
        raise ValueError(f"sites {sites} are not adjacent on a ring of {n_sites}")
    if vector.shape != (1 << n_sites,):
        raise ValueError(f"vector length {vector.shape} != 2^{n_sites}")
    psi = np.asarray(vector).reshape([2] * n_sites)
    keep = [s0, s1, s2]
    rest = [i for i in range(n_sites) if i not in keep]
    mat = np.transpose(psi, keep + rest).reshape(8, -1)
    rho = hermitian_part(mat @ mat.conj().T)
    rho /= np.trace(rho).real
    return DensityMatrix(PartyShape([2, 2, 2]), rho)


@dataclass
class SweepRow:
    h: float
    gmre_value: float | None = None
    log_gmn_value: float | None = None
    gmre_status: str = "skipped"
    gmn_status: str = "skipped"


def sweep(
    spec: SweepSpec,
    chain: ChainConfig | None = None,
    cfg: SolveConfig | None = None,
    max_workers: int = 1,
) -> list[SweepRow]:
    """Measure the three-site reduced state across the field grid.

    One row per grid value, emitted in input order; per-row solver failures
    are recorded in the row's status fields and the sweep continues.
    """
    chain = chain or ChainConfig()
    cfg = cfg or SolveConfig()
    n = chain.n_sites
    sites = spec.sites or ((n // 2 - 1) % n, (n // 2) % n, (n // 2 + 1) % n)

    def run(h: float) -> SweepRow:
        row = SweepRow(h=h)
        try:
            _, vec = ground_state(ChainConfig(n_sites=n, h=h, boundary=chain.boundary))
            rdm = three_site_rdm(vec, n, sites)
        except Exception as e:  # pragma: no cover - defensive per-row capture
            row.gmre_status = row.gmn_status = f"error: {e}"
            return row
        if "gmre" in spec.measures:
            try:
                rep = gmre(rdm, cfg)
                row.gmre_value, row.gmre_status = rep.value, rep.status
            except Exception as e:
                row.gmre_status = f"error: {e}"
        if "log_gmn" in spec.measures:
            try:
                rep = log_gmn(rdm, cfg)
                row.log_gmn_value, row.gmn_status = rep.value, rep.status
            except Exception as e:
                row.gmn_status = f"error: {e}"
        return row

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as ex:
            return list(ex.map(run, spec.h_values))
    return [run(h) for h in spec.h_values]


def _fmt6(x: float | None) -> str:
    return "" if x is None else format(x, ".6g")


def _csv_safe(status: str) -> str:
    return status.replace(",", ";").replace("\n", " ")


def rows_to_csv(rows: list[SweepRow]) -> str:
    lines = ["h,gmre,log_gmn,gmre_status,gmn_status"]
    for r in rows:
        lines.append(
            f"{_fmt6(r.h)},{_fmt6(r.gmre_value)},{_fmt6(r.log_gmn_value)},"
            f"{_csv_safe(r.gmre_status)},{_csv_safe(r.gmn_status)}"
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[SweepRow]) -> str:
    doc = [
        {
            "h": r.h,
            "gmre": r.gmre_value,
            "log_gmn": r.log_gmn_value,
            "gmre_status": r.gmre_status,
            "gmn_status": r.gmn_status,
        }
        for r in rows
    ]
    return json.dumps(doc, indent=2) + "\n"
