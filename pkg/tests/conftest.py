import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    ph = np.diag(r).copy()
    return q * (ph / np.abs(ph))[None, :]


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    u = random_unitary(rng, n)
    lam = np.zeros(n)
    lam[:rank] = rng.uniform(0.5, 2.0, size=rank)
    return (u * lam) @ u.conj().T


def ginibre(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def pair_oracle(rng, t, q, samples):
    """Fully independent radius lower bound from raw admissible pairs.

    Samples (x, z) without the alignment step: y = conj(q) x + sqrt(1-q^2) z
    with z a random unit vector orthogonal to x.  Converges slowly; used only
    to cross-check the closed-form inner supremum.
    """
    n = t.shape[0]
    q = complex(q)
    c = np.sqrt(max(0.0, 1.0 - abs(q) ** 2))
    x = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    tx = x @ t.T
    g = np.einsum("mr,mr->m", x.conj(), tx)
    if c == 0.0 or n == 1:
        return float(np.max(np.abs(q * g)))
    z = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    z -= np.einsum("mr,mr->m", x.conj(), z)[:, None] * x
    zn = np.linalg.norm(z, axis=1, keepdims=True)
    keep = zn[:, 0] > 1e-12
    vals = q * g[keep] + c * np.einsum(
        "mr,mr->m", (z[keep] / zn[keep]).conj(), tx[keep])
    return float(np.max(np.abs(vals)))
