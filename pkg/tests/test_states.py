"""State algebra: bipartitions, partial transpose, named states, file I/O."""

import numpy as np
import pytest

from gmre.entropy import quantum_rel_entropy
from gmre.linalg import trace_norm
from gmre.states import (
    Bipartition,
    DensityMatrix,
    KrausChannel,
    PartyShape,
    StateFormatError,
    apply_channel,
    dephased_ghz,
    enumerate_bipartitions,
    fidelity,
    ghz_state,
    partial_trace,
    partial_transpose,
    random_density_matrix,
    read_state_file,
    swap_operator,
    write_state_file,
)


def test_bipartition_counts():
    assert len(enumerate_bipartitions(2)) == 1
    assert len(enumerate_bipartitions(3)) == 3
    assert len(enumerate_bipartitions(4)) == 7


def test_bipartition_order_k3():
    blocks = [sorted(b.block) for b in enumerate_bipartitions(3)]
    assert blocks == [[0], [0, 1], [0, 2]]


def test_bipartition_canonical():
    for k in range(2, 7):
        parts = enumerate_bipartitions(k)
        assert len(parts) == 2 ** (k - 1) - 1
        seen = set()
        for b in parts:
            comp = frozenset(range(k)) - b.block
            assert 0 in b.block and comp
            assert comp not in seen
            seen.add(b.block)


def test_bipartition_rejects():
    with pytest.raises(ValueError):
        enumerate_bipartitions(1)
    with pytest.raises(ValueError):
        Bipartition(frozenset({1}), 3)
    with pytest.raises(ValueError):
        Bipartition(frozenset({0, 1}), 2)


def test_partial_transpose_product_state():
    shape = PartyShape([2, 2])
    rng = np.random.default_rng(0)
    a = random_density_matrix(PartyShape([2, 2]), 1).matrix  # any 4x4 state
    ra = np.kron(a[:2, :2] / np.trace(a[:2, :2]).real, np.eye(2) / 2)
    part = enumerate_bipartitions(2)[0]
    pt = partial_transpose(ra, shape, part)
    assert np.allclose(np.sort(np.linalg.eigvalsh(pt)), np.sort(np.linalg.eigvalsh(ra)), atol=1e-12)


def test_partial_transpose_bell():
    bell = ghz_state(2, 2)
    pt = partial_transpose(bell.matrix, bell.shape, enumerate_bipartitions(2)[0])
    assert np.allclose(np.sort(np.linalg.eigvalsh(pt)), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_involution_and_preservation():
    rng = np.random.default_rng(1)
    shape = PartyShape([2, 2, 2])
    parts = enumerate_bipartitions(3)
    for k in range(100):
        g = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        h = (g + g.conj().T) / 2
        b = parts[k % 3]
        pt = partial_transpose(h, shape, b)
        assert np.abs(partial_transpose(pt, shape, b) - h).max() < 1e-14
        assert abs(np.trace(pt) - np.trace(h)) < 1e-12
        assert np.abs(pt - pt.conj().T).max() < 1e-14


def test_ghz_purity():
    for d, n in ((2, 2), (2, 3), (3, 2)):
        rho = ghz_state(d, n)
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
        assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx(1.0, abs=1e-12)


def test_ghz_partial_transpose_is_scaled_swap():
    for d, n in ((2, 3), (3, 2), (2, 4)):
        rho = ghz_state(d, n)
        for b in enumerate_bipartitions(n):
            f = swap_operator(rho.shape, b)
            pt = partial_transpose(rho.matrix, rho.shape, b)
            assert np.abs(d * pt - f).max() < 1e-12


def test_dephased_ghz_diagonal():
    rho = dephased_ghz(2, 3)
    assert np.allclose(rho.matrix, np.diag([0.5, 0, 0, 0, 0, 0, 0, 0.5]), atol=1e-14)


def test_dephased_ghz_in_feasible_set_cost():
    # sum_i ||T_m(|i..i><i..i|)||_1 / d = 1 for any bipartition
    d, n = 2, 3
    shape = PartyShape([d] * n)
    for b in enumerate_bipartitions(n):
        total = 0.0
        for i in range(d):
            v = np.zeros(shape.dim)
            v[i * (shape.dim - 1) // (d - 1)] = 1.0
            proj = np.outer(v, v).astype(complex)
            total += trace_norm(partial_transpose(proj, shape, b)) / d
        assert total == pytest.approx(1.0, abs=1e-12)


def test_ghz_vs_dephased_relative_entropy():
    for d, n in ((2, 3), (3, 2)):
        val = quantum_rel_entropy(ghz_state(d, n), dephased_ghz(d, n))
        assert val == pytest.approx(np.log2(d), abs=1e-10)


def test_swap_operator_two_qubits():
    shape = PartyShape([2, 2])
    f = swap_operator(shape, enumerate_bipartitions(2)[0])
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[3, 3] = 1
    expected[1, 2] = expected[2, 1] = 1
    assert np.allclose(f, expected, atol=1e-14)
    assert np.allclose(np.sort(np.linalg.eigvalsh(f)), [-1, 1, 1, 1], atol=1e-12)


def test_swap_operator_norm_and_projector():
    shape = PartyShape([2, 2, 2])
    for b in enumerate_bipartitions(3):
        f = swap_operator(shape, b)
        assert np.abs(np.linalg.eigvalsh(f)).max() == pytest.approx(1.0, abs=1e-12)
        f2 = f @ f
        assert np.linalg.matrix_rank(f2, tol=1e-10) == 4  # rank d^2 projector
        assert np.linalg.norm(f2 @ f2 - f2) < 1e-12


def test_swap_operator_rejects_unequal_dims():
    with pytest.raises(ValueError):
        swap_operator(PartyShape([2, 3]), enumerate_bipartitions(2)[0])


def test_fidelity_basics():
    rng = np.random.default_rng(2)
    shape = PartyShape([2, 2])
    rho = random_density_matrix(shape, 11)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    v0 = np.zeros(4); v0[0] = 1
    v1 = np.zeros(4); v1[3] = 1
    p0 = DensityMatrix(shape, np.outer(v0, v0).astype(complex))
    p1 = DensityMatrix(shape, np.outer(v1, v1).astype(complex))
    assert fidelity(p0, p1) == pytest.approx(0.0, abs=1e-12)
    bell = ghz_state(2, 2)
    mixed = DensityMatrix(shape, np.eye(4, dtype=complex) / 4)
    assert fidelity(bell, mixed) == pytest.approx(0.25, abs=1e-10)


def test_fidelity_symmetry_and_data_processing():
    shape = PartyShape([2, 2])
    for k in range(50):
        rho = random_density_matrix(shape, 100 + k)
        sig = random_density_matrix(shape, 200 + k)
        f1 = fidelity(rho, sig)
        assert f1 == pytest.approx(fidelity(sig, rho), abs=1e-10)
        fr = fidelity(
            partial_trace(rho.matrix, shape, [1]),
            partial_trace(sig.matrix, shape, [1]),
        )
        assert fr >= f1 - 1e-9


def test_partial_trace_all_parties():
    shape = PartyShape([2, 2, 2])
    rho = random_density_matrix(shape, 5)
    out = partial_trace(rho.matrix, shape, [0, 1, 2])
    assert out.shape == (1, 1)
    assert out[0, 0].real == pytest.approx(1.0, abs=1e-12)


def test_partial_trace_shape_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4, dtype=complex), PartyShape([2, 2, 2]), [0])


def test_apply_identity_channel():
    shape = PartyShape([2, 2])
    rho = random_density_matrix(shape, 3)
    ch = KrausChannel([np.eye(4, dtype=complex)])
    out = apply_channel(ch, rho)
    assert np.abs(out.matrix - rho.matrix).max() < 1e-12


def test_random_density_matrix_deterministic():
    shape = PartyShape([2, 2, 2])
    a = random_density_matrix(shape, 42)
    b = random_density_matrix(shape, 42)
    assert a.matrix.tobytes() == b.matrix.tobytes()
    c = random_density_matrix(shape, 43)
    assert a.matrix.tobytes() != c.matrix.tobytes()
    w = np.linalg.eigvalsh(a.matrix)
    assert w.min() > 1e-6  # full rank


def test_density_matrix_validation():
    shape = PartyShape([2, 2])
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix(shape, np.eye(4, dtype=complex))
    bad = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError, match="not PSD"):
        DensityMatrix(shape, bad)


def test_state_file_round_trip(tmp_path):
    rho = random_density_matrix(PartyShape([2, 3]), 17)
    path = tmp_path / "state.json"
    write_state_file(str(path), rho)
    back = read_state_file(str(path))
    assert back.shape.dims == (2, 3)
    assert np.array_equal(back.matrix, rho.matrix)


def test_state_file_rejects_non_hermitian(tmp_path):
    import json

    rho = ghz_state(2, 2)
    path = tmp_path / "bad.json"
    write_state_file(str(path), rho)
    doc = json.loads(path.read_text())
    doc["matrix"][0][1][0] += 1e-3
    path.write_text(json.dumps(doc))
    with pytest.raises(StateFormatError, match=r"entry \(\d+,\d+\)"):
        read_state_file(str(path))


def test_state_file_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"dims": [2, 2], "matrix": [[')
    with pytest.raises(StateFormatError, match="line"):
        read_state_file(str(path))


def test_state_file_rejects_bad_trace(tmp_path):
    import json

    path = tmp_path / "t.json"
    rho = ghz_state(2, 2)
    write_state_file(str(path), rho)
    doc = json.loads(path.read_text())
    doc["matrix"][0][0][0] += 0.2
    path.write_text(json.dumps(doc))
    with pytest.raises(StateFormatError, match="trace"):
        read_state_file(str(path))
