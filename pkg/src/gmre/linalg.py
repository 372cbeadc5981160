"""Dense Hermitian linear algebra kernels used by every other module.

All matrices here are plain complex numpy arrays. Inputs are checked for
Hermiticity once at the boundary; everything downstream works in an
eigenbasis. Tolerances are absolute throughout because every operator we
handle has trace at most one.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

LN2 = float(np.log(2.0))

# Eigenvalue floor applied before evaluating logs; keeps relative-entropy
# objectives finite when an iterate grazes the boundary of the PSD cone.
EIG_FLOOR = 1e-12

# Absolute tolerance for Hermiticity checks at operation boundaries.
HERM_ATOL = 1e-10


class NonHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""

    def __init__(self, asym: float):
        self.asym = asym
        super().__init__(f"matrix is not Hermitian: max |A - A^dag| = {asym:.3e}")


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Return (A + A^dag) / 2."""
    return (a + a.conj().T) / 2


def check_hermitian(a: np.ndarray, atol: float = HERM_ATOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asym = float(np.abs(a - a.conj().T).max()) if a.size else 0.0
    if asym > atol:
        raise NonHermitianError(asym)
    return hermitian_part(a)


def eig_hermitian(h: np.ndarray, atol: float = HERM_ATOL) -> EigenDecomposition:
    """Eigendecompose a Hermitian matrix; eigenvalues ascending."""
    h = check_hermitian(h, atol)
    w, u = np.linalg.eigh(h)
    return EigenDecomposition(w, u)


def matrix_function(
    h: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    floor: float | None = None,
) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    When `floor` is given, eigenvalues are clamped from below before
    evaluating f (useful for PSD inputs whose spectrum dips a hair below
    zero). If f is undefined (non-finite) at any floored eigenvalue, a
    domain error naming that eigenvalue is raised.
    """
    w, u = eig_hermitian(h)
    wf = w if floor is None else np.maximum(w, floor)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(wf), dtype=float)
    if not np.all(np.isfinite(fw)):
        bad = wf[~np.isfinite(fw)][0]
        raise ValueError(f"scalar function undefined at floored eigenvalue {bad!r}")
    return hermitian_part((u * fw) @ u.conj().T)


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    m = check_hermitian(m)
    return float(np.abs(np.linalg.eigvalsh(m)).sum())


def psd_project(h: np.ndarray) -> np.ndarray:
    """Frobenius projection onto the PSD cone (clip negative eigenvalues)."""
    w, u = eig_hermitian(h)
    w = np.maximum(w, 0.0)
    return hermitian_part((u * w) @ u.conj().T)


def psd_project_batch(hs: np.ndarray) -> np.ndarray:
    """Clip a stack of Hermitian matrices (..., d, d) onto the PSD cone."""
    w, u = np.linalg.eigh(hs)
    w = np.maximum(w, 0.0)
    out = np.einsum("...ij,...j,...kj->...ik", u, w, u.conj())
    return (out + np.swapaxes(out, -1, -2).conj()) / 2


def log_gradient(
    tau: np.ndarray,
    rho: np.ndarray,
    floor: float = EIG_FLOOR,
) -> tuple[np.ndarray, bool]:
    """Gradient of tau -> Tr[rho log2 tau] at a PSD point.

    In the eigenbasis of tau the entries are rho_ij * g(l_i, l_j) / ln 2,
    where g is the divided difference of the natural log and g(l, l) = 1/l.
    The gradient of the relative entropy D(rho||tau) with respect to tau is
    the negative of this matrix.

    Returns the gradient and a flag that is True when the eigenvalue floor
    was active (the point sits on the boundary of the PSD cone).
    """
    w, u = eig_hermitian(tau)
    floored = bool(w.min() < floor)
    wf = np.maximum(w, floor)
    rho_t = u.conj().T @ rho @ u
    lw = np.log(wf)
    num = lw[:, None] - lw[None, :]
    den = wf[:, None] - wf[None, :]
    near = np.abs(den) < 1e-14 * np.maximum(wf[:, None], wf[None, :])
    g = np.where(near, 1.0 / wf[:, None], num / np.where(den == 0.0, 1.0, den))
    grad = u @ (rho_t * g) @ u.conj().T / LN2
    return hermitian_part(grad), floored


def power_gradient(
    tau: np.ndarray,
    w_sens: np.ndarray,
    s: float,
    floor: float = EIG_FLOOR,
) -> np.ndarray:
    """Pull a sensitivity matrix back through tau -> tau^s.

    Given dF = Tr[W d(tau^s)], returns G with dF = Tr[G dtau], using divided
    differences of x^s on the floored spectrum of tau.
    """
    w, u = eig_hermitian(tau)
    wf = np.maximum(w, floor)
    ws = wf**s
    wt = u.conj().T @ w_sens @ u
    num = ws[:, None] - ws[None, :]
    den = wf[:, None] - wf[None, :]
    near = np.abs(den) < 1e-14 * np.maximum(wf[:, None], wf[None, :])
    dd = np.where(near, s * wf[:, None] ** (s - 1.0), num / np.where(den == 0.0, 1.0, den))
    return hermitian_part(u @ (wt * dd) @ u.conj().T)
