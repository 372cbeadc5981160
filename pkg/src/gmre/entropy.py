"""Classical and quantum entropic functionals.

Infinite divergences are returned as math.inf (never a large float) so that
bound formulas can short-circuit on them. Support containment is decided
with an eigenvalue threshold of SUPP_TOL.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import eig_hermitian, hermitian_part

# Eigenvalues below this are treated as outside the support.
SUPP_TOL = 1e-10


def _as_matrix(x) -> np.ndarray:
    return np.asarray(getattr(x, "matrix", x), dtype=complex)


def binary_entropy(p: float) -> float:
    """h2(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p!r}")
    out = 0.0
    for x in (p, 1.0 - p):
        if x > 0.0:
            out -= x * math.log2(x)
    return out


def classical_rel_entropy(p, q) -> float:
    """D(p||q) = sum p(x) log2(p(x)/q(x)); +inf unless supp(p) is in supp(q)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {q.shape}")
    if (p < -1e-15).any() or (q < -1e-15).any():
        raise ValueError("negative entries in a distribution argument")
    if abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"first argument must be a distribution, sums to {p.sum()!r}")
    on = p > 0.0
    if (q[on] <= 0.0).any():
        return math.inf
    return float(np.sum(p[on] * np.log2(p[on] / q[on])))


def binary_rel_entropy_profile(p: float, r0: float, r1: float) -> tuple[float, float]:
    """Value of f(p) = D((p,1-p)||(r0,r1)) together with its minimizer.

    Returns (p_star, f(p)) with p_star = r0/(r0+r1): f decreases strictly on
    (0, p_star) and increases strictly above it.
    """
    if r0 <= 0.0 or r1 <= 0.0:
        raise ValueError(f"reference weights must be positive, got ({r0!r}, {r1!r})")
    value = classical_rel_entropy([p, 1.0 - p], [r0, r1])
    return r0 / (r0 + r1), value


def quantum_entropy(rho) -> float:
    """von Neumann entropy -Tr[rho log2 rho] in bits."""
    w = np.linalg.eigvalsh(_as_matrix(rho))
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w)))


def quantum_rel_entropy(rho, sigma) -> float:
    """D(rho||sigma) = Tr[rho(log2 rho - log2 sigma)] or +inf.

    sigma may be any PSD operator; the value is nonnegative whenever
    Tr[sigma] <= 1.
    """
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"shape mismatch: {r.shape} vs {s.shape}")
    w, u = eig_hermitian(s)
    outside = w < SUPP_TOL
    diag_r = np.einsum("ji,jk,ki->i", u.conj(), r, u).real
    if diag_r[outside].sum() > SUPP_TOL:
        return math.inf
    on = ~outside
    val = -quantum_entropy(r) - float(np.sum(diag_r[on] * np.log2(w[on])))
    return val


def sandwiched_renyi(rho, sigma, alpha: float) -> float:
    """Sandwiched Renyi divergence of order alpha in bits.

    Defined for alpha in [1/2, 1) u (1, inf); for alpha > 1 the support of
    rho must lie in the support of sigma (else +inf). Monotone nondecreasing
    in alpha and converging to the relative entropy as alpha -> 1.
    """
    if not (0.5 <= alpha < 1.0 or alpha > 1.0):
        raise ValueError(f"alpha must lie in [1/2, 1) or (1, inf), got {alpha!r}")
    r = _as_matrix(rho)
    s = _as_matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"shape mismatch: {r.shape} vs {s.shape}")
    w, u = eig_hermitian(s)
    on = w >= SUPP_TOL
    if alpha > 1.0:
        diag_r = np.einsum("ji,jk,ki->i", u.conj(), r, u).real
        if diag_r[~on].sum() > SUPP_TOL:
            return math.inf
    ex = (1.0 - alpha) / (2.0 * alpha)
    pw = np.where(on, np.maximum(w, SUPP_TOL) ** ex, 0.0)
    half = (u * pw) @ u.conj().T
    g = hermitian_part(half @ r @ half)
    gv = np.maximum(np.linalg.eigvalsh(g), 0.0)
    total = float(np.sum(gv**alpha))
    if total <= 0.0:
        return math.inf
    return math.log2(total) / (alpha - 1.0)
