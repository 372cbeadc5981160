"""Kernel-level checks: eigendecomposition, matrix functions, gradients."""

import numpy as np
import pytest

from gmre.linalg import (
    LN2,
    NonHermitianError,
    eig_hermitian,
    hermitian_part,
    log_gradient,
    matrix_function,
    power_gradient,
    psd_project,
    trace_norm,
)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return hermitian_part(g)


def random_psd(rng, d, trace_one=True):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real if trace_one else m


def bell_state():
    v = np.zeros(4)
    v[0] = v[3] = 1 / np.sqrt(2)
    return np.outer(v, v).astype(complex)


def bell_partial_transpose():
    m = bell_state().reshape(2, 2, 2, 2)
    return np.ascontiguousarray(m.transpose(0, 3, 2, 1).reshape(4, 4))


def test_eig_identity():
    w, u = eig_hermitian(np.eye(3, dtype=complex))
    assert np.allclose(w, [1, 1, 1])
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-12)


def test_eig_pauli_z():
    w, _ = eig_hermitian(np.diag([1.0, -1.0]).astype(complex))
    assert np.allclose(w, [-1, 1])


def test_eig_reconstruction_random():
    rng = np.random.default_rng(0)
    h = random_hermitian(rng, 8)
    w, u = eig_hermitian(h)
    assert np.all(np.diff(w) >= -1e-14)
    assert np.linalg.norm((u * w) @ u.conj().T - h) < 1e-10
    assert np.linalg.norm(u.conj().T @ u - np.eye(8)) < 1e-10


def test_eig_rejects_non_hermitian():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(NonHermitianError) as exc:
        eig_hermitian(m)
    assert exc.value.asym == pytest.approx(1.0)


def test_matrix_function_identity():
    rng = np.random.default_rng(1)
    h = random_hermitian(rng, 5)
    assert np.linalg.norm(matrix_function(h, lambda x: x) - h) < 1e-12


def test_matrix_function_log2_diagonal():
    h = np.diag([1.0, 2.0, 4.0]).astype(complex)
    out = matrix_function(h, np.log2)
    assert np.allclose(out, np.diag([0.0, 1.0, 2.0]), atol=1e-12)


def test_matrix_function_sqrt_consistency():
    rng = np.random.default_rng(2)
    p = random_psd(rng, 6)
    r = matrix_function(p, np.sqrt, floor=0.0)
    assert np.linalg.norm(r @ r - p) < 1e-9


def test_matrix_function_domain_error_names_eigenvalue():
    h = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="undefined at floored eigenvalue"):
        matrix_function(h, np.log2, floor=0.0)


def test_trace_norm_basics():
    assert trace_norm(np.eye(4, dtype=complex)) == pytest.approx(4.0)
    assert trace_norm(np.diag([1.0, -1.0]).astype(complex)) == pytest.approx(2.0)


def test_trace_norm_bell_partial_transpose():
    pt = bell_partial_transpose()
    w = np.sort(np.linalg.eigvalsh(pt))
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    assert trace_norm(pt) == pytest.approx(2.0, abs=1e-12)


def test_trace_norm_dominates_trace():
    rng = np.random.default_rng(3)
    for _ in range(20):
        h = random_hermitian(rng, 5)
        assert trace_norm(h) >= abs(np.trace(h).real) - 1e-12
    p = random_psd(rng, 5, trace_one=False)
    assert trace_norm(p) == pytest.approx(np.trace(p).real, abs=1e-10)


def test_log_gradient_identity_tau():
    rng = np.random.default_rng(4)
    rho = random_psd(rng, 4)
    g, floored = log_gradient(np.eye(4, dtype=complex), rho)
    assert not floored
    assert np.linalg.norm(g - rho / LN2) < 1e-12


def test_log_gradient_commuting_diagonal():
    lam = np.array([0.1, 0.3, 0.6])
    rho = np.diag([0.5, 0.25, 0.25]).astype(complex)
    g, _ = log_gradient(np.diag(lam).astype(complex), rho)
    assert np.allclose(np.diag(g).real, np.diag(rho).real / (lam * LN2), atol=1e-12)


def _fd_gradient(fun, tau, eps=1e-6):
    d = tau.shape[0]
    g = np.zeros((d, d), complex)
    for i in range(d):
        for j in range(i, d):
            h = np.zeros((d, d), complex)
            h[i, j] += 1.0
            h[j, i] += 1.0
            if i == j:
                h[i, i] = 1.0
            dr = (fun(tau + eps * h) - fun(tau - eps * h)) / (2 * eps)
            if i == j:
                g[i, i] = dr
                continue
            h = np.zeros((d, d), complex)
            h[i, j] = 1j
            h[j, i] = -1j
            di = (fun(tau + eps * h) - fun(tau - eps * h)) / (2 * eps)
            g[i, j] = (dr + 1j * di) / 2
            g[j, i] = (dr - 1j * di) / 2
    return g


def test_log_gradient_matches_finite_differences():
    rng = np.random.default_rng(5)
    for trial in range(50):
        d = int(rng.integers(2, 9))
        rho = random_psd(rng, d)
        tau = random_psd(rng, d) + 0.05 * np.eye(d)

        def phi(t):
            w, u = np.linalg.eigh(hermitian_part(t))
            diag = np.einsum("ji,jk,ki->i", u.conj(), rho, u).real
            return float(np.sum(diag * np.log2(np.maximum(w, 1e-300))))

        g, _ = log_gradient(tau, rho)
        g_fd = _fd_gradient(phi, tau)
        assert np.abs(g - g_fd).max() < 1e-5


def test_log_gradient_floor_flag():
    rho = np.diag([1.0, 0.0]).astype(complex)
    tau = np.diag([1.0, 0.0]).astype(complex)
    _, floored = log_gradient(tau, rho)
    assert floored


def test_psd_project_fixed_point_and_clip():
    rng = np.random.default_rng(6)
    p = random_psd(rng, 5)
    assert np.linalg.norm(psd_project(p) - p) < 1e-12
    out = psd_project(np.diag([1.0, -1.0]).astype(complex))
    assert np.allclose(out, np.diag([1.0, 0.0]), atol=1e-12)


def test_psd_project_idempotent():
    rng = np.random.default_rng(7)
    h = random_hermitian(rng, 6)
    p1 = psd_project(h)
    assert np.linalg.norm(psd_project(p1) - p1) < 1e-12


def test_psd_project_variational():
    # <H - P(H), X - P(H)> <= 0 for any PSD X characterizes the projection
    rng = np.random.default_rng(8)
    h = random_hermitian(rng, 5)
    p = psd_project(h)
    assert np.linalg.eigvalsh(p).min() >= -1e-12
    for _ in range(20):
        x = random_psd(rng, 5, trace_one=False)
        inner = np.real(np.vdot(h - p, x - p))
        assert inner <= 1e-8


def test_power_gradient_matches_finite_differences():
    rng = np.random.default_rng(9)
    for s in (-0.25, 0.5):
        tau = random_psd(rng, 4) + 0.1 * np.eye(4)
        w_sens = random_hermitian(rng, 4)

        def phi(t):
            w, u = np.linalg.eigh(hermitian_part(t))
            ts = (u * np.maximum(w, 1e-12) ** s) @ u.conj().T
            return float(np.real(np.trace(w_sens @ ts)))

        g = power_gradient(tau, w_sens, s)
        g_fd = _fd_gradient(phi, tau)
        assert np.abs(g - g_fd).max() < 1e-5
