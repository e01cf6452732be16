"""A-weighted operator geometry for a positive semidefinite metric A.

A PSD metric ``A`` induces the semi-inner product ``<x, y>_A = <Ax, y>``.
Everything A-weighted reduces to classical linear algebra on the range of
``A`` through the compression ``T~ = S U* T U S^{-1}``, where ``U`` holds an
orthonormal basis of the range and ``S = diag(sqrt(eigenvalues))``: the map
``x -> S U* x`` is an isometry from (range(A), ||.||_A) onto C^r, and for any
operator mapping null(A) into itself the compression represents it there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import (
    DimensionMismatch,
    NoAAdjoint,
    NotABounded,
    NotPSD,
    RankTooSmall,
)

RANK_TOL = 1e-10     # relative eigenvalue cutoff for rank detection
BOUNDED_TOL = 1e-8   # relative residual tolerance for A-boundedness
SHARP_TOL = 1e-8     # relative residual tolerance for the A-adjoint
PSD_REL_TOL = kernel.PSD_TOL


@dataclass(frozen=True)
class SemiSpace:
    """Validated PSD metric with its rank-r reduction data.

    metric   -- the (symmetrized) PSD matrix A, n x n
    rank     -- r = number of eigenvalues above rank_tol * lambda_max
    basis    -- n x r, orthonormal columns spanning range(A)
    scale    -- r positive values sqrt(lambda_i), descending
    proj     -- orthogonal projector onto range(A)
    rank_tol -- the cutoff used for rank detection
    """

    metric: np.ndarray
    rank: int
    basis: np.ndarray
    scale: np.ndarray
    proj: np.ndarray
    rank_tol: float

    @property
    def dim(self) -> int:
        return self.metric.shape[0]


def build_space(a, rank_tol: float = RANK_TOL) -> SemiSpace:
    """Validate a PSD metric and extract its range-space reduction."""
    a = kernel.require_square(a)
    eig = kernel.herm_eig(a)
    lmax = float(np.max(eig.values)) if eig.values.size else 0.0
    if lmax <= 0.0:
        raise RankTooSmall("metric is zero; rank must be at least 2")
    if float(np.min(eig.values)) < -PSD_REL_TOL * lmax:
        raise NotPSD("metric has a negative eigenvalue beyond tolerance")
    keep = eig.values > rank_tol * lmax
    rank = int(np.count_nonzero(keep))
    if rank < 2:
        raise RankTooSmall(f"metric rank {rank} < 2")
    order = np.argsort(-eig.values[keep], kind="stable")
    basis = eig.vectors[:, keep][:, order]
    scale = np.sqrt(eig.values[keep][order])
    proj = basis @ basis.conj().T
    return SemiSpace(
        metric=(a + a.conj().T) / 2.0,
        rank=rank,
        basis=basis,
        scale=scale,
        proj=proj,
        rank_tol=rank_tol,
    )


def a_inner(space: SemiSpace, x, y) -> complex:
    """Semi-inner product <x, y>_A = <Ax, y>, linear in x, conjugate-linear in y."""
    x = np.asarray(x, dtype=complex).reshape(-1)
    y = np.asarray(y, dtype=complex).reshape(-1)
    if x.shape[0] != space.dim or y.shape[0] != space.dim:
        raise DimensionMismatch("vector length does not match the metric")
    return complex(y.conj() @ (space.metric @ x))


def a_norm(space: SemiSpace, x) -> float:
    val = a_inner(space, x, x).real
    return float(np.sqrt(max(val, 0.0)))


def is_a_bounded(space: SemiSpace, t, tol: float = BOUNDED_TOL):
    """Check T(null(A)) <= null(A); returns (ok, residual)."""
    t = kernel.require_square(t)
    if t.shape[0] != space.dim:
        raise DimensionMismatch("operator size does not match the metric")
    ahalf = (space.basis * space.scale) @ space.basis.conj().T
    comp = np.eye(space.dim) - space.proj
    resid = kernel.spectral_norm(ahalf @ t @ comp)
    bound = tol * max(kernel.spectral_norm(ahalf) * kernel.spectral_norm(t), 1e-300)
    return bool(resid <= bound), float(resid)


def sharp(space: SemiSpace, t, tol: float = SHARP_TOL) -> np.ndarray:
    """A-adjoint: the reduced solution X of A X = T* A with range(X) <= range(A)."""
    t = kernel.require_square(t)
    a = space.metric
    scale = max(kernel.spectral_norm(a) * kernel.spectral_norm(t), 1e-300)
    comp = np.eye(space.dim) - space.proj
    if kernel.spectral_norm(comp @ t.conj().T @ a) > tol * scale:
        raise NoAAdjoint("range condition fails: T* A does not map into range(A)")
    x = kernel.pinv(a, rtol=space.rank_tol) @ t.conj().T @ a
    if kernel.spectral_norm(a @ x - t.conj().T @ a) > tol * scale:
        raise NoAAdjoint("residual of A X = T* A exceeds tolerance")
    if kernel.spectral_norm(comp @ x) > tol * max(kernel.spectral_norm(x), 1e-300):
        raise NoAAdjoint("solution leaks outside range(A)")
    return x


def cartesian(space: SemiSpace, t):
    """A-Cartesian decomposition: (T + T#)/2 and (T - T#)/(2i)."""
    ts = sharp(space, t)
    t = kernel.require_square(t)
    return (t + ts) / 2.0, (t - ts) / 2.0j


def compress(space: SemiSpace, t) -> np.ndarray:
    """Reduction of an A-bounded operator to the r-dimensional range space."""
    ok, resid = is_a_bounded(space, t)
    if not ok:
        raise NotABounded(f"operator does not preserve null(A); residual {resid:.3e}")
    u, s = space.basis, space.scale
    core = u.conj().T @ np.asarray(t, dtype=complex) @ u
    return (core * s[:, None]) / s[None, :]


def a_op_norm(space: SemiSpace, t) -> float:
    """Operator seminorm ||T||_A = spectral norm of the compression."""
    return kernel.spectral_norm(compress(space, t))


def a_spectral_radius(space: SemiSpace, t) -> float:
    """A-spectral radius: largest eigenvalue modulus of the compression."""
    return float(np.max(np.abs(np.linalg.eigvals(compress(space, t)))))


def embed(space: SemiSpace, xi) -> np.ndarray:
    """Right inverse of the isometry x -> S U* x: returns U S^{-1} xi."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != space.rank:
        raise DimensionMismatch("compressed vector length does not match the rank")
    return space.basis @ (xi / space.scale)
