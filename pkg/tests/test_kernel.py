import json

import numpy as np
import pytest

from qnrlab import kernel
from qnrlab.errors import (
    DimensionMismatch,
    NonSquare,
    NotAccretive,
    NotHermitian,
    NotPSD,
    SingularForNegativePower,
)
from conftest import ginibre, random_hermitian, random_unitary


def test_re_im_part_examples():
    eye = np.eye(2, dtype=complex)
    assert np.allclose(kernel.re_part(eye), eye)
    m = np.array([[0, 2], [0, 0]], dtype=complex)
    assert np.allclose(kernel.re_part(m), [[0, 1], [1, 0]])
    m = np.array([[1 + 1j, 0], [0, 1 - 1j]])
    assert np.allclose(kernel.re_part(m), eye)
    assert np.allclose(kernel.im_part(m), np.diag([1.0, -1.0]))


def test_re_part_reconstruction(rng):
    m = ginibre(rng, 5)
    assert np.allclose(kernel.re_part(m) + 1j * kernel.im_part(m), m, atol=1e-14)
    herm = kernel.re_part(m)
    assert np.allclose(herm, herm.conj().T)


def test_re_part_nonsquare():
    with pytest.raises(NonSquare):
        kernel.re_part(np.ones((2, 3)))


def test_herm_eig_examples():
    e = kernel.herm_eig(np.diag([3.0, 1.0]).astype(complex))
    assert np.allclose(e.values, [1.0, 3.0])
    e = kernel.herm_eig(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(e.values, [-1.0, 1.0])
    e = kernel.herm_eig(np.eye(4, dtype=complex))
    assert np.allclose(e.values, np.ones(4))


def test_herm_eig_reconstruction(rng):
    for n in (2, 4, 8):
        m = random_hermitian(rng, n)
        e = kernel.herm_eig(m)
        rec = (e.vectors * e.values) @ e.vectors.conj().T
        assert kernel.spectral_norm(rec - m) <= 1e-12 * kernel.spectral_norm(m)
        assert np.allclose(e.vectors.conj().T @ e.vectors, np.eye(n), atol=1e-12)


def test_herm_eig_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        kernel.herm_eig(np.array([[0, 1], [0, 0]], dtype=complex))


def test_spectral_norm_examples():
    assert kernel.spectral_norm(np.array([[0, 1], [0, 0]])) == pytest.approx(1.0)
    assert kernel.spectral_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)
    # lmax(M*M) for [[1,1],[0,1]] solves x^2 - 3x + 1 = 0
    golden = np.sqrt((3 + np.sqrt(5)) / 2)
    assert kernel.spectral_norm(np.array([[1, 1], [0, 1]])) == pytest.approx(golden, abs=1e-12)


def test_spectral_norm_unitary_invariance(rng):
    m = ginibre(rng, 4)
    u, v = random_unitary(rng, 4), random_unitary(rng, 4)
    assert kernel.spectral_norm(u @ m @ v) == pytest.approx(
        kernel.spectral_norm(m), abs=1e-12)


def test_pinv_examples():
    assert np.allclose(kernel.pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    assert np.allclose(kernel.pinv(np.eye(3)), np.eye(3))
    assert np.allclose(kernel.pinv(np.ones((2, 2))), np.full((2, 2), 0.25))


def test_pinv_moore_penrose_and_involution(rng):
    m = ginibre(rng, 4)
    p = kernel.pinv(m)
    assert np.allclose(m @ p @ m, m, atol=1e-10)
    assert np.allclose(p @ m @ p, p, atol=1e-10)
    assert np.allclose((m @ p).conj().T, m @ p, atol=1e-10)
    assert np.allclose((p @ m).conj().T, p @ m, atol=1e-10)
    assert kernel.spectral_norm(kernel.pinv(p) - m) <= 1e-10 * kernel.spectral_norm(m)


def test_pinv_rank_cutoff():
    m = np.diag([1.0, 1e-14])
    p = kernel.pinv(m, rtol=1e-8)
    assert p[1, 1] == 0.0


def test_psd_power_examples():
    assert np.allclose(kernel.psd_power(np.diag([9.0, 4.0]), 0.5), np.diag([3.0, 2.0]))
    assert np.allclose(kernel.psd_power(np.eye(3), 0.7), np.eye(3))
    assert np.allclose(kernel.psd_power(np.diag([2.0, 8.0]), -1.0),
                       np.diag([0.5, 0.125]))


def test_psd_power_properties(rng):
    m = random_hermitian(rng, 4)
    m = m @ m.conj().T + 0.1 * np.eye(4)
    root = kernel.psd_power(m, 0.5)
    assert kernel.spectral_norm(root @ root - m) <= 1e-10 * kernel.spectral_norm(m)
    a, b = 0.3, 1.1
    lhs = kernel.psd_power(m, a + b)
    rhs = kernel.psd_power(m, a) @ kernel.psd_power(m, b)
    assert kernel.spectral_norm(lhs - rhs) <= 1e-10 * kernel.spectral_norm(lhs)


def test_psd_power_errors():
    with pytest.raises(NotPSD):
        kernel.psd_power(np.diag([1.0, -1.0]), 0.5)
    with pytest.raises(SingularForNegativePower):
        kernel.psd_power(np.diag([1.0, 0.0]), -1.0)


def test_accretive_inv_examples():
    assert np.allclose(kernel.accretive_inv(np.eye(2)), np.eye(2))
    got = kernel.accretive_inv(np.diag([1 + 1j, 1 - 1j]))
    assert np.allclose(got, np.diag([(1 - 1j) / 2, (1 + 1j) / 2]))
    assert np.allclose(kernel.accretive_inv(2 * np.eye(3)), 0.5 * np.eye(3))


def test_accretive_inv_residual(rng):
    m = ginibre(rng, 4)
    m = m @ m.conj().T + 0.5 * np.eye(4) + 1j * random_hermitian(rng, 4)
    inv = kernel.accretive_inv(m)
    cond = np.linalg.cond(m)
    assert kernel.spectral_norm(m @ inv - np.eye(4)) <= 1e-12 * cond


def test_accretive_inv_rejects():
    with pytest.raises(NotAccretive):
        kernel.accretive_inv(-np.eye(2))
    with pytest.raises(NotAccretive):
        kernel.accretive_inv(np.array([[1j]]))


def test_matrix_json_roundtrip(rng):
    m = ginibre(rng, 3)[:, :2]
    obj = kernel.matrix_to_json(m)
    assert obj["rows"] == 3 and obj["cols"] == 2
    back = kernel.matrix_from_json(json.loads(json.dumps(obj)))
    assert np.array_equal(back, m)


def test_matrix_json_rejects_bad_payloads():
    with pytest.raises(DimensionMismatch):
        kernel.matrix_from_json({"rows": 2, "cols": 2, "data": [[1, 0]]})
    with pytest.raises(DimensionMismatch):
        kernel.matrix_from_json({"rows": 1, "cols": 1, "data": [[1, 0, 0]]})
    with pytest.raises(DimensionMismatch):
        kernel.matrix_from_json({"rows": 1, "cols": 1})
    with pytest.raises(DimensionMismatch):
        kernel.matrix_from_json({"rows": 0, "cols": 1, "data": []})


def test_matrix_json_rejects_nonfinite():
    with pytest.raises((DimensionMismatch, ValueError)):
        kernel.matrix_from_json({"rows": 1, "cols": 1, "data": [[np.inf, 0]]})


def test_save_load(tmp_path, rng):
    m = ginibre(rng, 3)
    path = tmp_path / "m.json"
    kernel.save_matrix(path, m)
    assert np.array_equal(kernel.load_matrix(path), m)
