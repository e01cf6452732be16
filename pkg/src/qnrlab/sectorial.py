"""Sector-angle certificates and seeded random input generators.

A matrix is in the sector of half-angle alpha when its numerical range
lies in {z : Re z > 0, |Im z| <= tan(alpha) Re z}.  The minimal angle of
an accretive matrix is arctan of the largest eigenvalue modulus of the
balanced pencil Re(A)^{-1/2} Im(A) Re(A)^{-1/2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import InvalidSpec, NotAccretive

ACC_TOL = 1e-10
COND_LIMIT = 1e12

KINDS = ("psd", "sectorial", "accretive", "hermitian", "ginibre",
         "dominated_quadruple")


@dataclass(frozen=True)
class SectorCert:
    """Minimal sector angle with the quantities that produced it."""

    alpha_min: float    # arctan(rho), radians in [0, pi/2)
    re_min_eig: float   # smallest eigenvalue of Re(A)
    rho: float          # largest |eigenvalue| of the balanced pencil


@dataclass(frozen=True)
class GenSpec:
    """Seeded description of one random input family draw."""

    kind: str
    n: int
    alpha: float = 0.0
    rank: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown generator kind {self.kind!r}")
        if self.n < 2:
            raise InvalidSpec("dimension must be at least 2")
        if not (0.0 <= self.alpha < np.pi / 2):
            raise InvalidSpec("alpha must lie in [0, pi/2)")
        if self.rank is not None and not (1 <= self.rank <= self.n):
            raise InvalidSpec("rank must lie in [1, n]")


def sector_angle(a) -> SectorCert:
    """Minimal sector half-angle of an accretive matrix."""
    a = kernel.require_square(a)
    re = kernel.re_part(a)
    im = kernel.im_part(a)
    revals = np.linalg.eigvalsh(re)
    lmin, lmax = float(revals[0]), float(revals[-1])
    if lmin <= ACC_TOL * max(kernel.spectral_norm(a), 1e-300):
        raise NotAccretive("real part is not positive definite")
    if lmax / lmin > COND_LIMIT:
        raise NotAccretive(
            f"real part too ill-conditioned for a reliable angle "
            f"(cond {lmax / lmin:.2e})")
    rinvh = kernel.psd_power(re, -0.5)
    pencil = rinvh @ im @ rinvh
    pencil = (pencil + pencil.conj().T) / 2.0
    rho = float(np.max(np.abs(np.linalg.eigvalsh(pencil))))
    return SectorCert(alpha_min=float(np.arctan(rho)), re_min_eig=lmin, rho=rho)


def is_in_sector(a, alpha: float, tol: float = ACC_TOL) -> bool:
    """Loewner test: tan(alpha) Re(A) +/- Im(A) >= 0 and Re(A) > 0."""
    a = kernel.require_square(a)
    re = kernel.re_part(a)
    im = kernel.im_part(a)
    scale = max(kernel.spectral_norm(a), 1e-300)
    if float(np.min(np.linalg.eigvalsh(re))) <= 0.0:
        return False
    t = np.tan(alpha)
    for sgn in (1.0, -1.0):
        shifted = t * re + sgn * im
        if float(np.min(np.linalg.eigvalsh(shifted))) < -tol * scale:
            return False
    return True


def numrange_support(t, theta: float):
    """Support function of the numerical range in direction theta.

    Returns (support, boundary_point) with support = lmax(Re(e^{-i theta} T))
    and boundary_point = <T x, x> for the top eigenvector x.
    """
    t = kernel.require_square(t)
    hm = kernel.re_part(np.exp(-1j * theta) * t)
    eig = kernel.herm_eig(hm)
    x = eig.vectors[:, -1]
    point = complex(x.conj() @ (t @ x))
    return float(eig.values[-1]), point


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _haar_unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    qm, rm = np.linalg.qr(g)
    ph = np.diag(rm).copy()
    ph = ph / np.abs(ph)
    return qm * ph[None, :]


def _rand_pd(rng, n, lo=0.5, hi=2.0):
    u = _haar_unitary(rng, n)
    lam = rng.uniform(lo, hi, size=n)
    return (u * lam) @ u.conj().T


def _rand_psd_rank(rng, n, rank, lo=0.5, hi=2.0):
    u = _haar_unitary(rng, n)
    lam = np.zeros(n)
    lam[:rank] = rng.uniform(lo, hi, size=rank)
    return (u * lam) @ u.conj().T


def _herm_contraction(rng, n):
    """Random Hermitian with spectral norm in [0.9, 1]."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    hm = (g + g.conj().T) / 2.0
    hm = hm / max(kernel.spectral_norm(hm), 1e-300)
    return hm * rng.uniform(0.9, 1.0)


def _sectorial(rng, n, alpha):
    hm = _rand_pd(rng, n)
    if alpha == 0.0:
        return hm
    cm = _herm_contraction(rng, n)
    hhalf = kernel.psd_power(hm, 0.5)
    return hm + 1j * np.tan(alpha) * (hhalf @ cm @ hhalf)


def gen(spec: GenSpec):
    """Draw from the requested input family; deterministic in the spec."""
    rng = np.random.default_rng((int(spec.seed) & 0x7FFFFFFFFFFFFFFF, 0x6E6))
    n = spec.n
    if spec.kind == "psd":
        rank = spec.rank if spec.rank is not None else n
        return _rand_psd_rank(rng, n, rank)
    if spec.kind == "hermitian":
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return (g + g.conj().T) / 2.0
    if spec.kind == "ginibre":
        return (rng.standard_normal((n, n))
                + 1j * rng.standard_normal((n, n))) / np.sqrt(n)
    if spec.kind == "accretive":
        hm = _rand_pd(rng, n)
        kappa = rng.uniform(0.0, 3.0)
        cm = _herm_contraction(rng, n)
        hhalf = kernel.psd_power(hm, 0.5)
        return hm + 1j * kappa * (hhalf @ cm @ hhalf)
    if spec.kind == "sectorial":
        return _sectorial(rng, n, spec.alpha)
    if spec.kind == "dominated_quadruple":
        a = _sectorial(rng, n, spec.alpha)
        b = _sectorial(rng, n, spec.alpha)
        out = [a, b]
        for base in (a, b):
            hb = kernel.re_part(base) + _rand_psd_rank(rng, n, n, lo=0.0, hi=1.0)
            if spec.alpha == 0.0:
                out.append(hb)
            else:
                cm = _herm_contraction(rng, n)
                hhalf = kernel.psd_power(hb, 0.5)
                out.append(hb + 1j * np.tan(spec.alpha) * (hhalf @ cm @ hhalf))
        return tuple(out)
    raise InvalidSpec(f"unknown generator kind {spec.kind!r}")
