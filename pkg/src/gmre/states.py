"""Multipartite state algebra: shapes, bipartitions, named states, channels.

Basis convention: the computational basis is row-major over parties in
declared order, so party 0 carries the most significant index. This fixes
the meaning of partial transpose and partial trace indices everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .linalg import check_hermitian, hermitian_part, eig_hermitian

TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10


@dataclass(frozen=True)
class PartyShape:
    """Per-party local dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        object.__setattr__(self, "dims", tuple(int(d) for d in dims))
        if len(self.dims) < 2:
            raise ValueError("need at least two parties")
        if any(d < 2 for d in self.dims):
            raise ValueError(f"every local dimension must be >= 2, got {self.dims}")

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))


@dataclass(frozen=True)
class Bipartition:
    """Canonical two-block split of the parties.

    The stored block is the side containing party 0; the unordered split
    {block, complement} is what it labels. `mask` encodes the block as a
    bitmask (bit i set iff party i in the block), which also defines the
    deterministic enumeration order.
    """

    block: frozenset[int] = field(compare=True)
    k: int = field(compare=True)

    def __post_init__(self):
        if 0 not in self.block:
            raise ValueError("canonical bipartition block must contain party 0")
        if not self.block < set(range(self.k)):
            raise ValueError("block must be a proper subset of the parties")

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.block)

    def __repr__(self) -> str:
        return f"Bipartition({sorted(self.block)}|{sorted(set(range(self.k)) - self.block)})"


def enumerate_bipartitions(k: int) -> list[Bipartition]:
    """All 2^(k-1) - 1 canonical bipartitions, ascending by block bitmask."""
    if k < 2:
        raise ValueError(f"need at least two parties, got k={k}")
    full = (1 << k) - 1
    out = []
    for mask in range(1, full):
        if mask & 1:
            out.append(Bipartition(frozenset(i for i in range(k) if (mask >> i) & 1), k))
    return out


def partial_transpose(m: np.ndarray, shape: PartyShape, part: Bipartition) -> np.ndarray:
    """Transpose the tensor indices of the parties in the bipartition block."""
    dims = shape.dims
    d = shape.dim
    if m.shape != (d, d):
        raise ValueError(f"matrix shape {m.shape} inconsistent with party dims {dims}")
    k = shape.k
    t = np.asarray(m).reshape(dims + dims)
    for a in sorted(part.block):
        t = np.swapaxes(t, a, k + a)
    return np.ascontiguousarray(t.reshape(d, d))


def partial_trace(m: np.ndarray, shape: PartyShape, traced: Iterable[int]) -> np.ndarray:
    """Trace out the given parties; tracing all of them yields [[Tr m]]."""
    dims = shape.dims
    d = shape.dim
    if m.shape != (d, d):
        raise ValueError(f"matrix shape {m.shape} inconsistent with party dims {dims}")
    traced = sorted(set(traced))
    if any(p < 0 or p >= shape.k for p in traced):
        raise ValueError(f"traced parties {traced} out of range for k={shape.k}")
    t = np.asarray(m).reshape(dims + dims)
    k = shape.k
    for n_done, p in enumerate(traced):
        ax = p - n_done
        t = np.trace(t, axis1=ax, axis2=ax + (k - n_done))
    d_keep = int(np.prod([dims[i] for i in range(k) if i not in traced], initial=1))
    return t.reshape(d_keep, d_keep)


@dataclass
class DensityMatrix:
    """A quantum state: Hermitian, PSD, unit trace, with party structure."""

    shape: PartyShape
    matrix: np.ndarray

    def __post_init__(self):
        m = check_hermitian(self.matrix)
        if m.shape[0] != self.shape.dim:
            raise ValueError(
                f"matrix dimension {m.shape[0]} != product of party dims {self.shape.dims}"
            )
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > TRACE_ATOL:
            raise ValueError(f"trace must be 1, got {tr!r}")
        wmin = float(np.linalg.eigvalsh(m).min())
        if wmin < -PSD_ATOL:
            raise ValueError(f"state is not PSD: min eigenvalue {wmin:.3e}")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.shape.dim

    def reduced(self, traced: Iterable[int]) -> np.ndarray:
        return partial_trace(self.matrix, self.shape, traced)


def _basis_index(digits: Sequence[int], dims: Sequence[int]) -> int:
    idx = 0
    for x, d in zip(digits, dims):
        idx = idx * d + x
    return idx


def ghz_state(d: int, n: int) -> DensityMatrix:
    """The n-party GHZ state of local dimension d: (1/d) sum_ij |i..i><j..j|."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    shape = PartyShape([d] * n)
    v = np.zeros(shape.dim, dtype=complex)
    for i in range(d):
        v[_basis_index([i] * n, shape.dims)] = 1.0
    v /= np.sqrt(d)
    return DensityMatrix(shape, np.outer(v, v.conj()))


def dephased_ghz(d: int, n: int) -> DensityMatrix:
    """The completely dephased GHZ state (1/d) sum_i |i..i><i..i|."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    shape = PartyShape([d] * n)
    m = np.zeros((shape.dim, shape.dim), dtype=complex)
    for i in range(d):
        j = _basis_index([i] * n, shape.dims)
        m[j, j] = 1.0 / d
    return DensityMatrix(shape, m)


def swap_operator(shape: PartyShape, part: Bipartition) -> np.ndarray:
    """Swap operator exchanging the repeated labels across a bipartition.

    Defined for equal local dimensions d as
    sum_{k,j} |k..k, j..j><j..j, k..k| with k on the block side; it equals
    d times the partial transpose of the GHZ state over that block.
    """
    dims = shape.dims
    d = dims[0]
    if any(x != d for x in dims):
        raise ValueError(f"swap operator needs equal local dims, got {dims}")
    f = np.zeros((shape.dim, shape.dim), dtype=complex)
    block = part.block
    for a in range(d):
        for b in range(d):
            ket = _basis_index([a if i in block else b for i in range(shape.k)], dims)
            bra = _basis_index([b if i in block else a for i in range(shape.k)], dims)
            f[ket, bra] += 1.0
    return f


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1^2, in [0, 1]."""
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    w, u = eig_hermitian(r)
    sq = (u * np.sqrt(np.maximum(w, 0.0))) @ u.conj().T
    inner = sq @ s @ sq
    vals = np.linalg.eigvalsh(hermitian_part(inner))
    f = float(np.sqrt(np.maximum(vals, 0.0)).sum() ** 2)
    return min(max(f, 0.0), 1.0)


def _as_matrix(x) -> np.ndarray:
    return np.asarray(getattr(x, "matrix", x), dtype=complex)


@dataclass
class KrausChannel:
    """A quantum channel in Kraus form; sum K^dag K = identity for channels."""

    kraus_ops: list[np.ndarray]

    def __post_init__(self):
        self.kraus_ops = [np.asarray(k, dtype=complex) for k in self.kraus_ops]
        if not self.kraus_ops:
            raise ValueError("need at least one Kraus operator")
        din = self.kraus_ops[0].shape[1]
        if any(k.shape[1] != din for k in self.kraus_ops):
            raise ValueError("inconsistent Kraus input dimensions")
        s = sum(k.conj().T @ k for k in self.kraus_ops)
        dev = float(np.abs(s - np.eye(din)).max())
        self.tp_deviation = dev

    def is_trace_preserving(self, atol: float = 1e-10) -> bool:
        return self.tp_deviation <= atol


def apply_channel(ch: KrausChannel, rho: DensityMatrix, out_shape: PartyShape | None = None) -> DensityMatrix:
    """Apply a trace-preserving Kraus channel to a state."""
    if not ch.is_trace_preserving():
        raise ValueError(f"channel is not trace preserving (deviation {ch.tp_deviation:.3e})")
    m = sum(k @ rho.matrix @ k.conj().T for k in ch.kraus_ops)
    m = hermitian_part(m)
    m /= np.trace(m).real
    if out_shape is None:
        out_shape = rho.shape
    return DensityMatrix(out_shape, m)


def random_density_matrix(shape: PartyShape, seed: int, rank: int | None = None) -> DensityMatrix:
    """Seeded full-rank random state: G G^dag / Tr with G complex Gaussian.

    An optional rank < dim draws G with that many columns, giving low-rank
    (more entangled) samples with the same normalized-Wishart recipe.
    """
    rng = np.random.default_rng(seed)
    d = shape.dim
    r = d if rank is None else int(rank)
    g = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return DensityMatrix(shape, m)


# ---------------------------------------------------------------------------
# State file format shared with the CLI:
#   {"dims": [d1, ..., dk], "matrix": [[[re, im], ...], ...]}  (row-major)
# Floats are emitted with 17 significant digits so the round trip is exact.
# ---------------------------------------------------------------------------


class StateFormatError(ValueError):
    """Raised when a state file fails structural or physical validation."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_state_file(path: str, dm: DensityMatrix) -> None:
    m = dm.matrix
    d = dm.dim
    rows = []
    for i in range(d):
        cells = ",".join(f"[{_fmt(m[i, j].real)},{_fmt(m[i, j].imag)}]" for j in range(d))
        rows.append(f"[{cells}]")
    dims = ",".join(str(x) for x in dm.shape.dims)
    with open(path, "w") as fh:
        fh.write('{"dims": [%s], "matrix": [\n%s\n]}\n' % (dims, ",\n".join(rows)))


def read_state_file(path: str) -> DensityMatrix:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise StateFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(doc, dict) or "dims" not in doc or "matrix" not in doc:
        raise StateFormatError('state file must be an object with "dims" and "matrix"')
    try:
        shape = PartyShape(doc["dims"])
    except (TypeError, ValueError) as e:
        raise StateFormatError(f'bad "dims" field: {e}')
    d = shape.dim
    raw = doc["matrix"]
    if len(raw) != d or any(len(row) != d for row in raw):
        raise StateFormatError(f'"matrix" must be {d}x{d} for dims {list(shape.dims)}')
    m = np.empty((d, d), dtype=complex)
    for i, row in enumerate(raw):
        for j, cell in enumerate(row):
            if not (isinstance(cell, list) and len(cell) == 2):
                raise StateFormatError(f"matrix entry ({i},{j}) must be a [re, im] pair")
            m[i, j] = complex(cell[0], cell[1])
    asym = np.abs(m - m.conj().T)
    if asym.max() > TRACE_ATOL:
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        raise StateFormatError(
            f"matrix is not Hermitian: entry ({i},{j}) deviates from "
            f"conj(({j},{i})) by {asym[i, j]:.3e}"
        )
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise StateFormatError(f"trace must be 1 within {TRACE_ATOL}, got {tr!r}")
    wmin = float(np.linalg.eigvalsh(hermitian_part(m)).min())
    if wmin < -PSD_ATOL:
        raise StateFormatError(f"matrix is not PSD: min eigenvalue {wmin:.3e}")
    return DensityMatrix(shape, m)
