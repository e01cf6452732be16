import numpy as np
import pytest

import qnrlab.qnr as qnr
from qnrlab import kernel, semihilbert as sh
from qnrlab.errors import DimensionTooSmall, InvalidSpec
from conftest import ginibre, pair_oracle, random_psd

JORDAN = np.array([[0, 1], [0, 0]], dtype=complex)
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)


def golden_jordan(q):
    return (1.0 + np.sqrt(1.0 - q * q)) / 2.0


@pytest.mark.parametrize("q", [0.0, 0.3, 0.6, 1.0])
def test_jordan_golden_values(q):
    res = qnr.q_radius(None, JORDAN, q)
    assert res.value == pytest.approx(golden_jordan(q), abs=1e-6)


def test_identity_radius_is_q():
    for q in (0.0, 0.3, 0.9, 1.0):
        assert qnr.q_radius(None, np.eye(2), q).value == pytest.approx(q, abs=1e-10)


def test_flip_radius_is_norm():
    # the symmetric 0/1 matrix attains the operator-norm upper bound
    assert qnr.q_radius(None, FLIP, 0.6).value == pytest.approx(1.0, abs=1e-9)


def test_q_objective_examples():
    assert qnr.q_objective(np.eye(2), [1, 0], 0.6) == pytest.approx(0.6)
    # unit vector mapped to an orthogonal unit vector, zero diagonal part
    assert qnr.q_objective(JORDAN, [0, 1], 0.0) == pytest.approx(1.0)
    q = 0.6
    th = 0.5 * np.arcsin(q)
    x = [np.cos(th), np.sin(th)]
    assert qnr.q_objective(FLIP, x, q) == pytest.approx(1.0, abs=1e-12)


def test_q_objective_matches_pair_sampling(rng):
    # closed-form inner supremum vs raw admissible-pair sampling (dim 2:
    # the only freedom in z is a phase, so sampling converges fast)
    t = ginibre(rng, 2)
    for q in (0.3, 0.8):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x /= np.linalg.norm(x)
        val = qnr.q_objective(t, x, q)
        c = np.sqrt(1 - q * q)
        tx = t @ x
        g = complex(x.conj() @ tx)
        w = tx - g * x
        phases = np.exp(2j * np.pi * rng.random(100000))
        z = (w / np.linalg.norm(w))[None, :] * phases[:, None]
        vals = np.abs(q * g + c * np.einsum("mr,r->m", z.conj(), tx))
        assert val >= vals.max() - 1e-12
        assert val - vals.max() <= 1e-6 * max(1.0, val)


def test_q_objective_validation():
    with pytest.raises(InvalidSpec):
        qnr.q_objective(np.eye(2), [1, 1], 0.5)  # not unit
    with pytest.raises(DimensionTooSmall):
        qnr.q_objective(np.eye(1), [1.0], 0.5)
    with pytest.raises(InvalidSpec):
        qnr.check_q(1.1)


def test_dim_one_identity_q():
    res = qnr.q_radius(None, np.array([[2.0]]), 1.0)
    assert res.value == pytest.approx(2.0)
    with pytest.raises(DimensionTooSmall):
        qnr.q_radius(None, np.array([[2.0]]), 0.5)


def test_weighted_example_matches_compression():
    a = np.diag([1.0, 1.0, 0.0]).astype(complex)
    t = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 5]], dtype=complex)
    sp = sh.build_space(a)
    res = qnr.q_radius(sp, t, 0.6)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_witness_invariants(rng):
    sp = sh.build_space(random_psd(rng, 4, rank=3))
    p = sp.proj
    comp = np.eye(4) - p
    t = p @ ginibre(rng, 4) @ p + comp @ ginibre(rng, 4) @ comp
    for q in (0.4, 0.95 + 0.0j, 0.5j):
        res = qnr.q_radius(sp, t, q)
        x, y = res.witness.x, res.witness.y
        assert sh.a_norm(sp, x) == pytest.approx(1.0, abs=1e-9)
        assert sh.a_norm(sp, y) == pytest.approx(1.0, abs=1e-9)
        assert sh.a_inner(sp, x, y) == pytest.approx(complex(q), abs=1e-9)
        assert abs(sh.a_inner(sp, t @ x, y)) == pytest.approx(res.value, abs=1e-9)
        assert res.oracle_lower <= res.value + 1e-9
        assert res.value <= sh.a_op_norm(sp, t) + 1e-9


def test_phase_invariance(rng):
    t = ginibre(rng, 3)
    for mag in (0.3, 0.8):
        base = qnr.q_radius(None, t, mag).value
        rot = qnr.q_radius(None, t, mag * np.exp(0.7j)).value
        assert rot == pytest.approx(base, abs=1e-8)


def test_homogeneity(rng):
    for _ in range(20):
        n = int(rng.integers(2, 5))
        t = ginibre(rng, n)
        c = complex(rng.standard_normal() + 1j * rng.standard_normal())
        q = float(rng.uniform(0.05, 1.0))
        w1 = qnr.q_radius(None, c * t, q).value
        w2 = abs(c) * qnr.q_radius(None, t, q).value
        assert w1 == pytest.approx(w2, abs=1e-8 * max(1.0, w2))


def test_compression_consistency(rng):
    for _ in range(5):
        sp = sh.build_space(random_psd(rng, 4, rank=3))
        p = sp.proj
        comp = np.eye(4) - p
        t = p @ ginibre(rng, 4) @ p + comp @ ginibre(rng, 4) @ comp
        q = float(rng.uniform(0.1, 1.0))
        full = qnr.q_radius(sp, t, q).value
        small = qnr.q_radius(None, sh.compress(sp, t), q).value
        assert full == pytest.approx(small, abs=1e-9)


def test_oracle_dominance(rng):
    for _ in range(10):
        t = ginibre(rng, 3)
        q = float(rng.uniform(0.0, 1.0))
        res = qnr.q_radius(None, t, q)
        assert res.value >= res.oracle_lower - 1e-9


def test_independent_pair_oracle_agrees(rng):
    # raw-pair oracle is a crude lower bound; solver must dominate it and,
    # at dim 2, come close from above
    t = ginibre(rng, 2)
    q = 0.6
    res = qnr.q_radius(None, t, q)
    lo = pair_oracle(rng, t, q, 200000)
    assert res.value >= lo - 1e-9
    assert res.value - lo <= 5e-3 * res.value


def test_classical_radius_examples():
    assert qnr.classical_radius(JORDAN) == pytest.approx(0.5, abs=1e-10)
    assert qnr.classical_radius(np.diag([-3.0, 2.0])) == pytest.approx(3.0, abs=1e-10)
    assert qnr.classical_radius(np.eye(3)) == pytest.approx(1.0, abs=1e-12)


def test_classical_radius_matches_q1(rng):
    for _ in range(5):
        t = ginibre(rng, 3)
        sweep = qnr.classical_radius(t)
        solver = qnr.q_radius(None, t, 1.0).value
        assert sweep == pytest.approx(solver, abs=1e-8 * max(1.0, solver))


def test_engines_agree(rng):
    if qnr._kernels is None:
        pytest.skip("numba kernels unavailable")
    for _ in range(8):
        n = int(rng.integers(2, 5))
        t = ginibre(rng, n)
        q = float(rng.uniform(0.05, 1.0))
        cfg = qnr.SolverCfg(starts=16, oracle_samples=512, seed=3)
        fast = qnr.q_radius(None, t, q, cfg).value
        saved = qnr._kernels
        try:
            qnr._kernels = None
            slow = qnr.q_radius(None, t, q, cfg).value
        finally:
            qnr._kernels = saved
        assert fast == pytest.approx(slow, abs=1e-9 * max(1.0, slow))


def test_deterministic_given_seed(rng):
    t = ginibre(rng, 4)
    cfg = qnr.SolverCfg(seed=11)
    r1 = qnr.q_radius(None, t, 0.7, cfg)
    r2 = qnr.q_radius(None, t, 0.7, cfg)
    assert r1.value == r2.value
    assert np.array_equal(r1.witness.x, r2.witness.x)


# ---------------------------------------------------------------------------
# range sampling
# ---------------------------------------------------------------------------

def test_range_identity_collapses():
    cloud = qnr.q_range_sample(None, np.eye(2), 0.5, 60, seed=1)
    assert len(cloud.points) == 60
    assert np.allclose(cloud.points, 0.5, atol=1e-12)
    assert len(cloud.hull) == 1


def test_range_jordan_disc():
    cloud = qnr.q_range_sample(None, JORDAN, 1.0, 300, seed=2)
    assert np.all(np.abs(cloud.points) <= 0.5 + 1e-9)
    # enrichment pushes the hull to the boundary circle of radius 1/2
    hull_pts = cloud.points[list(cloud.hull)]
    assert np.max(np.abs(hull_pts)) >= 0.5 - 1e-3


def test_range_empty():
    cloud = qnr.q_range_sample(None, JORDAN, 0.3, 0, seed=0)
    assert len(cloud.points) == 0
    assert cloud.hull == ()


def test_range_points_bounded_by_radius(rng):
    t = ginibre(rng, 3)
    q = 0.7
    res = qnr.q_radius(None, t, q)
    cloud = qnr.q_range_sample(None, t, q, 400, seed=5)
    assert np.all(np.abs(cloud.points) <= res.value + 1e-8)


def test_point_cloud_csv_format():
    cloud = qnr.q_range_sample(None, JORDAN, 0.6, 25, seed=3)
    text = qnr.point_cloud_csv(cloud)
    lines = text.strip().split("\n")
    assert lines[0] == "re,im,on_hull"
    assert len(lines) == 26
    flags = {line.split(",")[2] for line in lines[1:]}
    assert flags <= {"0", "1"}
    # deterministic order: regenerating gives the identical file
    again = qnr.point_cloud_csv(qnr.q_range_sample(None, JORDAN, 0.6, 25, seed=3))
    assert text == again
