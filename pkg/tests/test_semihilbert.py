import numpy as np
import pytest

from qnrlab import kernel, semihilbert as sh
from qnrlab.errors import NoAAdjoint, NotABounded, NotPSD, RankTooSmall
from conftest import ginibre, random_psd, random_unitary

A3 = np.diag([1.0, 1.0, 0.0]).astype(complex)
T3 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 5]], dtype=complex)


def bounded_op(rng, space):
    n = space.dim
    p = space.proj
    comp = np.eye(n) - p
    return (p @ ginibre(rng, n) @ p + comp @ ginibre(rng, n) @ comp
            + comp @ ginibre(rng, n) @ p)


def test_build_space_identity():
    sp = sh.build_space(np.eye(3))
    assert sp.rank == 3
    assert np.allclose(sp.scale, np.ones(3))
    assert np.allclose(sp.proj, np.eye(3))


def test_build_space_diagonal():
    sp = sh.build_space(np.diag([4.0, 1.0, 0.0]))
    assert sp.rank == 2
    assert np.allclose(sp.scale, [2.0, 1.0])
    assert np.allclose(sp.proj, np.diag([1.0, 1.0, 0.0]))
    assert np.allclose(sp.proj @ sp.proj, sp.proj)


def test_build_space_errors():
    with pytest.raises(RankTooSmall):
        sh.build_space(np.diag([1.0, 0.0, 0.0]))
    with pytest.raises(NotPSD):
        sh.build_space(np.diag([1.0, -1.0]))


def test_a_inner_examples():
    spi = sh.build_space(np.eye(2))
    assert sh.a_inner(spi, [1, 0], [0, 1]) == pytest.approx(0.0)
    sp = sh.build_space(np.diag([4.0, 1.0, 0.0]))
    e1 = np.eye(3)[0]
    e3 = np.eye(3)[2]
    assert sh.a_inner(sp, e1, e1) == pytest.approx(4.0)
    assert sh.a_inner(sp, e3, e3) == pytest.approx(0.0)
    assert sh.a_norm(sp, e3) == pytest.approx(0.0)


def test_a_inner_sesquilinear(rng):
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    x, y, z = (rng.standard_normal(4) + 1j * rng.standard_normal(4) for _ in range(3))
    c = 0.7 - 0.3j
    assert sh.a_inner(sp, c * x + y, z) == pytest.approx(
        c * sh.a_inner(sp, x, z) + sh.a_inner(sp, y, z))
    assert sh.a_inner(sp, x, c * y) == pytest.approx(
        np.conj(c) * sh.a_inner(sp, x, y))
    norm_a = kernel.spectral_norm(sp.metric)
    assert sh.a_inner(sp, x, x).real >= -1e-12 * norm_a * np.linalg.norm(x) ** 2


def test_is_a_bounded_examples():
    sp = sh.build_space(A3)
    ok, _ = sh.is_a_bounded(sp, T3)
    assert ok
    perm = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    ok, resid = sh.is_a_bounded(sp, perm)
    assert not ok and resid > 1e-6
    spi = sh.build_space(np.eye(3))
    assert sh.is_a_bounded(spi, perm)[0]


def test_sharp_examples(rng):
    spi = sh.build_space(np.eye(3))
    t = ginibre(rng, 3)
    assert np.allclose(sh.sharp(spi, t), t.conj().T, atol=1e-12)
    sp = sh.build_space(A3)
    got = sh.sharp(sp, T3)
    assert np.allclose(got, np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]]), atol=1e-10)
    c = 0.3 - 1.2j
    assert np.allclose(sh.sharp(sp, c * np.eye(3)), np.conj(c) * sp.proj, atol=1e-10)


def test_sharp_residuals(rng):
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    t = bounded_op(rng, sp)
    x = sh.sharp(sp, t)
    a = sp.metric
    scale = kernel.spectral_norm(a) * kernel.spectral_norm(t)
    assert kernel.spectral_norm(a @ x - t.conj().T @ a) <= 1e-8 * scale
    comp = np.eye(4) - sp.proj
    assert kernel.spectral_norm(comp @ x) <= 1e-8 * kernel.spectral_norm(x)


def test_sharp_rejects_without_range_condition():
    sp = sh.build_space(A3)
    perm = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    with pytest.raises(NoAAdjoint):
        sh.sharp(sp, perm)


def test_sharp_involution_equals_projected(rng):
    sp = sh.build_space(random_psd(rng, 5, rank=3))
    t = bounded_op(rng, sp)
    twice = sh.sharp(sp, sh.sharp(sp, t))
    target = sp.proj @ t @ sp.proj
    assert kernel.spectral_norm(twice - target) <= 1e-8 * max(
        1.0, kernel.spectral_norm(target))


def test_sharp_preserves_op_norm(rng):
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    t = bounded_op(rng, sp)
    assert sh.a_op_norm(sp, t) == pytest.approx(
        sh.a_op_norm(sp, sh.sharp(sp, t)), abs=1e-8)


def test_cartesian(rng):
    spi = sh.build_space(np.eye(3))
    t = ginibre(rng, 3)
    re, im = sh.cartesian(spi, t)
    assert np.allclose(re, (t + t.conj().T) / 2)
    assert np.allclose(im, (t - t.conj().T) / 2j)
    h = (t + t.conj().T) / 2
    re, im = sh.cartesian(spi, h)
    assert np.allclose(re, h) and np.allclose(im, 0)

    sp = sh.build_space(A3)
    re, _ = sh.cartesian(sp, T3)
    assert np.allclose(re, np.array([[0, 1, 0], [1, 0, 0], [0, 0, 2.5]]), atol=1e-10)
    are = sp.metric @ re
    assert np.allclose(are, are.conj().T, atol=1e-10)


def test_compress_examples(rng):
    spi = sh.build_space(np.eye(3))
    t = ginibre(rng, 3)
    assert np.allclose(sh.compress(spi, t), t, atol=1e-12)
    sp = sh.build_space(A3)
    assert np.allclose(sh.compress(sp, T3), [[0, 1], [1, 0]], atol=1e-12)
    sp2 = sh.build_space(np.diag([4.0, 1.0, 0.0]))
    got = sh.compress(sp2, np.diag([1.0, 2.0, 3.0]).astype(complex))
    assert np.allclose(got, np.diag([1.0, 2.0]), atol=1e-12)


def test_compress_isometry_identity(rng):
    sp = sh.build_space(random_psd(rng, 5, rank=4))
    t = bounded_op(rng, sp)
    tt = sh.compress(sp, t)
    for _ in range(10):
        x = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        y = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        rho = lambda v: np.diag(sp.scale) @ (sp.basis.conj().T @ v)
        lhs = sh.a_inner(sp, t @ x, y)
        rhs = complex(rho(y).conj() @ (tt @ rho(x)))
        assert lhs == pytest.approx(rhs, abs=1e-9)


def test_compress_rejects_unbounded():
    sp = sh.build_space(A3)
    perm = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    with pytest.raises(NotABounded):
        sh.compress(sp, perm)


def test_a_op_norm_examples():
    sp = sh.build_space(A3)
    assert sh.a_op_norm(sp, T3) == pytest.approx(1.0, abs=1e-12)
    assert sh.a_op_norm(sp, 3.0 * sp.proj) == pytest.approx(3.0, abs=1e-12)


def test_a_spectral_radius_examples():
    spi = sh.build_space(np.eye(2))
    assert sh.a_spectral_radius(spi, np.diag([2.0, -1.0])) == pytest.approx(2.0)
    assert sh.a_spectral_radius(spi, np.array([[0, 1], [0, 0]])) == pytest.approx(0.0, abs=1e-12)
    sp = sh.build_space(A3)
    assert sh.a_spectral_radius(sp, T3) == pytest.approx(1.0, abs=1e-12)


def test_a_spectral_radius_gelfand_crosscheck(rng):
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    t = bounded_op(rng, sp)
    r = sh.a_spectral_radius(sp, t)
    tt = sh.compress(sp, t)
    power = tt.copy()
    seq = []
    for k in range(1, 21):
        seq.append(kernel.spectral_norm(power) ** (1.0 / k))
        power = power @ tt
    assert all(s >= r - 1e-9 for s in seq)
    if r > 0.1:
        assert seq[-1] <= 1.05 * r


def test_identity_metric_reduces_to_classical(rng):
    spi = sh.build_space(np.eye(4))
    t = ginibre(rng, 4)
    assert sh.a_op_norm(spi, t) == pytest.approx(kernel.spectral_norm(t), abs=1e-12)
    assert sh.a_spectral_radius(spi, t) == pytest.approx(
        float(np.max(np.abs(np.linalg.eigvals(t)))), abs=1e-12)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    y = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert sh.a_inner(spi, x, y) == pytest.approx(complex(y.conj() @ x), abs=1e-12)


def test_basis_invariance(rng):
    # any orthonormal basis of range(A) must give the same exported numbers
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    t = bounded_op(rng, sp)
    perm = rng.permutation(sp.rank)
    sp2 = sh.SemiSpace(metric=sp.metric, rank=sp.rank,
                       basis=sp.basis[:, perm], scale=sp.scale[perm],
                       proj=sp.proj, rank_tol=sp.rank_tol)
    assert sh.a_op_norm(sp2, t) == pytest.approx(sh.a_op_norm(sp, t), abs=1e-10)
    assert sh.a_spectral_radius(sp2, t) == pytest.approx(
        sh.a_spectral_radius(sp, t), abs=1e-10)
