"""Selective-operation certification and branch application."""

import numpy as np
import pytest

from gmre.linalg import trace_norm
from gmre.monotone import (
    BranchMap,
    SelectiveOperation,
    apply_selective,
    choi_matrix,
    is_selective_ppt,
    local_instrument,
    random_ppt_mixture,
)
from gmre.states import (
    PartyShape,
    enumerate_bipartitions,
    ghz_state,
    partial_transpose,
    random_density_matrix,
)

SHAPE3 = PartyShape([2, 2, 2])


def projective_measurement(shape: PartyShape, party: int) -> SelectiveOperation:
    d = shape.dims[party]
    left = int(np.prod(shape.dims[:party], initial=1))
    right = int(np.prod(shape.dims[party + 1:], initial=1))
    branches = []
    for k in range(d):
        p = np.zeros((d, d), dtype=complex)
        p[k, k] = 1.0
        branches.append(BranchMap([np.kron(np.kron(np.eye(left), p), np.eye(right))]))
    return SelectiveOperation(branches, shape)


def prepare_branch(op_matrix: np.ndarray) -> BranchMap:
    """Branch X -> op_matrix * Tr[X], expressed in (signed) Kraus form."""
    d = op_matrix.shape[0]
    w, u = np.linalg.eigh((op_matrix + op_matrix.conj().T) / 2)
    kraus, coeffs = [], []
    for lam, vec in zip(w, u.T):
        if abs(lam) < 1e-14:
            continue
        for k in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[:, k] = vec * np.sqrt(abs(lam))
            kraus.append(e)
            coeffs.append(1.0 if lam > 0 else -1.0)
    return BranchMap(kraus, coeffs)


def test_local_projective_measurement_passes_all_conditions():
    op = projective_measurement(SHAPE3, party=1)
    rep = is_selective_ppt(op)
    assert rep.cp_ok and rep.ppt_cp_ok and rep.tp_ok and rep.passes


def test_prepare_transposed_bell_fails_cp():
    bell = ghz_state(2, 2)
    part = enumerate_bipartitions(2)[0]
    pt_bell = partial_transpose(bell.matrix, bell.shape, part)
    op = SelectiveOperation([prepare_branch(pt_bell)], PartyShape([2, 2]))
    rep = is_selective_ppt(op)
    assert not rep.cp_ok
    assert rep.tp_ok  # trace of the prepared operator is one
    assert not rep.passes


def test_prepare_bell_fails_transposed_cp():
    bell = ghz_state(2, 2)
    op = SelectiveOperation([prepare_branch(bell.matrix)], PartyShape([2, 2]))
    rep = is_selective_ppt(op)
    assert rep.cp_ok
    assert not rep.ppt_cp_ok
    assert not rep.passes


def test_choi_of_prepare_map():
    bell = ghz_state(2, 2)
    br = prepare_branch(bell.matrix)
    j = choi_matrix(br.apply, 4, 4)
    assert np.abs(j - np.kron(np.eye(4), bell.matrix)).max() < 1e-12


def test_apply_identity_branch():
    op = SelectiveOperation([BranchMap([np.eye(8, dtype=complex)])], SHAPE3)
    rho = random_density_matrix(SHAPE3, 0)
    out = apply_selective(op, rho)
    assert len(out) == 1
    p, state = out[0]
    assert p == pytest.approx(1.0, abs=1e-12)
    assert np.abs(state.matrix - rho.matrix).max() < 1e-12


def test_z_measurement_on_plus_state():
    from gmre.states import DensityMatrix

    plus = np.ones((2, 2), dtype=complex) / 2
    rho = DensityMatrix(SHAPE3, np.kron(np.kron(plus, plus), plus))
    op = projective_measurement(SHAPE3, party=0)
    out = apply_selective(op, rho)
    assert len(out) == 2
    for p, _ in out:
        assert p == pytest.approx(0.5, abs=1e-12)
    assert sum(p for p, _ in out) == pytest.approx(1.0, abs=1e-10)


def test_zero_probability_branches_dropped():
    v = np.zeros(8)
    v[0] = 1.0
    from gmre.states import DensityMatrix

    rho = DensityMatrix(SHAPE3, np.outer(v, v).astype(complex))
    op = projective_measurement(SHAPE3, party=0)
    out = apply_selective(op, rho)
    assert len(out) == 1  # the |1> outcome never fires


def test_apply_rejects_non_tp():
    half = BranchMap([np.eye(8, dtype=complex) * 0.5])
    op = SelectiveOperation([half], SHAPE3)
    rho = random_density_matrix(SHAPE3, 2)
    with pytest.raises(ValueError, match="trace preserving"):
        apply_selective(op, rho)


def test_local_instrument_is_selective_and_tp():
    for seed in range(5):
        op = local_instrument(SHAPE3, party=seed % 3, seed=seed)
        assert op.tp_deviation() < 1e-10
        rep = is_selective_ppt(op)
        assert rep.passes


def test_pushforward_decomposition_reassembles():
    # branch outputs of a mixture inherit a valid pushed-forward decomposition
    parts = enumerate_bipartitions(3)
    for seed in range(20):
        weights, comps, mixed = random_ppt_mixture(SHAPE3, seed=seed)
        op = local_instrument(SHAPE3, party=seed % 3, seed=1000 + seed)
        branches = op.branches
        for br in branches:
            out = br.apply(mixed.matrix)
            q_x = np.trace(out).real
            if q_x <= 1e-12:
                continue
            sigma_x = out / q_x
            rebuilt = np.zeros_like(sigma_x)
            for r_m, comp in zip(weights, comps):
                pushed = br.apply(comp)
                rebuilt += r_m * pushed / q_x
            assert np.abs(rebuilt - sigma_x).max() < 1e-10


def test_norm_contraction_under_instruments():
    # summed PT trace norms never increase when an instrument acts branchwise
    parts = enumerate_bipartitions(3)
    for seed in range(20):
        weights, comps, _ = random_ppt_mixture(SHAPE3, seed=100 + seed)
        op = local_instrument(SHAPE3, party=seed % 3, seed=2000 + seed)
        before = sum(
            r_m * trace_norm(partial_transpose(comp, SHAPE3, b))
            for r_m, comp, b in zip(weights, comps, parts)
        )
        after = 0.0
        for r_m, comp, b in zip(weights, comps, parts):
            for br in op.branches:
                pushed = br.apply(comp)
                q = np.trace(pushed).real
                if q <= 1e-12:
                    continue
                after += r_m * q * trace_norm(partial_transpose(pushed / q, SHAPE3, b))
        assert after <= before + 1e-9


def test_branch_output_stays_ppt_mixture():
    # each component of the pushed-forward decomposition stays PPT for its cut
    parts = enumerate_bipartitions(3)
    for seed in range(10):
        weights, comps, mixed = random_ppt_mixture(SHAPE3, seed=300 + seed)
        op = local_instrument(SHAPE3, party=seed % 3, seed=3000 + seed)
        for br in op.branches:
            for comp, b in zip(comps, parts):
                pushed = br.apply(comp)
                if np.trace(pushed).real <= 1e-12:
                    continue
                w = np.linalg.eigvalsh(partial_transpose(pushed, SHAPE3, b))
                assert w.min() >= -1e-10
