import numpy as np
import pytest

from qnrlab import kernel, sectorial as sec
from qnrlab.errors import InvalidSpec, NotAccretive
from conftest import random_unitary


def test_sector_angle_examples():
    assert sec.sector_angle(np.eye(3)).alpha_min == pytest.approx(0.0, abs=1e-12)
    cert = sec.sector_angle(np.diag([1 + 1j, 1 - 1j]))
    assert cert.alpha_min == pytest.approx(np.pi / 4, abs=1e-12)
    assert cert.rho == pytest.approx(1.0, abs=1e-12)
    assert cert.re_min_eig == pytest.approx(1.0, abs=1e-12)


def test_sector_angle_hermitian_pd(rng):
    a = sec.gen(sec.GenSpec("psd", 4, rank=4, seed=9))
    assert sec.sector_angle(a).alpha_min == pytest.approx(0.0, abs=1e-9)


def test_sector_angle_rejects():
    with pytest.raises(NotAccretive):
        sec.sector_angle(-np.eye(2))
    with pytest.raises(NotAccretive):
        sec.sector_angle(np.diag([1.0, 0.0]))  # singular real part
    with pytest.raises(NotAccretive):
        sec.sector_angle(np.diag([1.0, 1e-14]))  # conditioning guard


def test_is_in_sector_examples():
    a = np.diag([1 + 1j, 1 - 1j])
    assert sec.is_in_sector(a, np.pi / 4)
    assert not sec.is_in_sector(a, np.pi / 6)
    assert not sec.is_in_sector(-np.eye(2), 0.3)
    assert not sec.is_in_sector(-np.eye(2), 1.4)


def test_angle_is_boundary_tight():
    for seed in range(5):
        spec = sec.GenSpec("sectorial", 3, alpha=np.pi / 5, seed=seed)
        a = sec.gen(spec)
        cert = sec.sector_angle(a)
        assert sec.is_in_sector(a, cert.alpha_min + 1e-6)
        if cert.alpha_min > 1e-6:
            assert not sec.is_in_sector(a, cert.alpha_min - 1e-6)


def test_sector_angle_unitary_invariance(rng):
    a = sec.gen(sec.GenSpec("sectorial", 4, alpha=np.pi / 6, seed=2))
    u = random_unitary(rng, 4)
    base = sec.sector_angle(a).alpha_min
    conj = sec.sector_angle(u @ a @ u.conj().T).alpha_min
    assert conj == pytest.approx(base, abs=1e-9)


def test_gen_psd_rank_pattern():
    a = sec.gen(sec.GenSpec("psd", 3, rank=2, seed=7))
    vals = np.sort(np.linalg.eigvalsh((a + a.conj().T) / 2))
    assert abs(vals[0]) <= 1e-12
    assert np.all(vals[1:] > 0.1)


def test_gen_sectorial_respects_target():
    for alpha in (0.0, np.pi / 8, np.pi / 4, np.pi / 3):
        for seed in range(15):
            a = sec.gen(sec.GenSpec("sectorial", 4, alpha=alpha, seed=seed))
            if alpha == 0.0:
                assert np.allclose(a, a.conj().T)
                assert np.min(np.linalg.eigvalsh(a.real)) > 0
            else:
                assert sec.sector_angle(a).alpha_min <= alpha + 1e-9


def test_gen_dominated_quadruple():
    a, b, c, d = sec.gen(sec.GenSpec("dominated_quadruple", 3,
                                     alpha=np.pi / 8, seed=5))
    for m in (a, b, c, d):
        assert sec.sector_angle(m).alpha_min <= np.pi / 8 + 1e-9
    assert np.min(np.linalg.eigvalsh(kernel.re_part(c) - kernel.re_part(a))) >= -1e-12
    assert np.min(np.linalg.eigvalsh(kernel.re_part(d) - kernel.re_part(b))) >= -1e-12


def test_gen_other_kinds():
    acc = sec.gen(sec.GenSpec("accretive", 3, seed=1))
    assert kernel.is_accretive(acc)
    h = sec.gen(sec.GenSpec("hermitian", 3, seed=1))
    assert np.allclose(h, h.conj().T)
    g = sec.gen(sec.GenSpec("ginibre", 3, seed=1))
    assert g.shape == (3, 3)


def test_gen_deterministic():
    spec = sec.GenSpec("sectorial", 4, alpha=0.4, seed=123)
    assert np.array_equal(sec.gen(spec), sec.gen(spec))


def test_genspec_validation():
    with pytest.raises(InvalidSpec):
        sec.GenSpec("nope", 3)
    with pytest.raises(InvalidSpec):
        sec.GenSpec("psd", 1)
    with pytest.raises(InvalidSpec):
        sec.GenSpec("sectorial", 3, alpha=np.pi / 2)
    with pytest.raises(InvalidSpec):
        sec.GenSpec("psd", 3, rank=5)


def test_numrange_support_examples():
    s, pt = sec.numrange_support(np.eye(2), 0.7)
    assert s == pytest.approx(1.0)
    assert pt == pytest.approx(1.0 + 0j)
    s, _ = sec.numrange_support(np.diag([1 + 1j, 1 - 1j]), 0.0)
    assert s == pytest.approx(1.0)
    s, _ = sec.numrange_support(np.array([[0, 1], [0, 0]], dtype=complex), 0.0)
    assert s == pytest.approx(0.5)


def test_numrange_support_consistency(rng):
    t = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    for theta in (0.0, 1.1, 2.9):
        s, pt = sec.numrange_support(t, theta)
        assert (np.exp(-1j * theta) * pt).real == pytest.approx(s, abs=1e-10)
