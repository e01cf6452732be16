"""Dense complex matrix kernel: validation, decompositions, and JSON I/O.

Matrices are plain ``numpy`` arrays of ``complex128``; every function
validates its input and raises a typed error from :mod:`qnrlab.errors`
instead of propagating raw LAPACK failures.  All functions are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonSquare,
    NotAccretive,
    NotHermitian,
    NotPSD,
    SingularForNegativePower,
)

HERM_TOL = 1e-10   # relative Hermiticity tolerance
PSD_TOL = 1e-10    # relative positive-semidefiniteness tolerance
ACC_TOL = 1e-10    # relative accretivity tolerance


def as_matrix(obj) -> np.ndarray:
    """Coerce to a 2-d complex128 array and check finiteness."""
    m = np.asarray(obj, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise DimensionMismatch("matrix contains non-finite entries")
    return m


def require_square(m: np.ndarray) -> np.ndarray:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def re_part(m) -> np.ndarray:
    """Hermitian part (M + M*)/2."""
    m = require_square(m)
    return (m + m.conj().T) / 2.0


def im_part(m) -> np.ndarray:
    """Skew part (M - M*)/(2i); Hermitian, and M = re_part + i*im_part."""
    m = require_square(m)
    return (m - m.conj().T) / 2.0j


@dataclass(frozen=True)
class HermEigen:
    """Eigendecomposition of a Hermitian matrix.

    values are ascending; vectors holds orthonormal eigenvectors as columns.
    """

    values: np.ndarray
    vectors: np.ndarray


def herm_eig(m, herm_tol: float = HERM_TOL) -> HermEigen:
    """Eigendecomposition of a (numerically) Hermitian matrix.

    The input is symmetrized before the solve to absorb rounding; inputs
    further than ``herm_tol * ||M||`` from Hermitian are rejected.
    """
    m = require_square(m)
    scale = spectral_norm(m)
    if spectral_norm(m - m.conj().T) > herm_tol * max(scale, 1e-300):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    return HermEigen(values=vals, vectors=vecs)


def spectral_norm(m) -> float:
    """Largest singular value."""
    m = as_matrix(m)
    return float(np.linalg.norm(m, 2))


def pinv(m, rtol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse with a relative singular-value cutoff.

    Singular values below ``rtol * sigma_max`` are treated as zero; the
    default cutoff is ``n * eps``.
    """
    m = as_matrix(m)
    if rtol is None:
        rtol = max(m.shape) * np.finfo(float).eps
    if rtol <= 0:
        raise DimensionMismatch("rtol must be positive")
    return np.linalg.pinv(m, rcond=rtol)


def psd_power(m, p: float, tol: float = PSD_TOL) -> np.ndarray:
    """Spectral power M^p of a PSD matrix (eigenvalues mapped by x -> x^p)."""
    m = require_square(m)
    eig = herm_eig(m)
    lmax = float(np.max(np.abs(eig.values))) if eig.values.size else 0.0
    if np.min(eig.values) < -tol * max(lmax, 1e-300):
        raise NotPSD("matrix is not PSD within tolerance")
    vals = np.clip(eig.values, 0.0, None)
    if p < 0 and np.min(vals) <= tol * max(lmax, 1e-300):
        raise SingularForNegativePower("negative power of a singular matrix")
    powered = np.where(vals > 0, vals, 0.0) ** p if p != 0 else np.ones_like(vals)
    v = eig.vectors
    return (v * powered) @ v.conj().T


def accretive_inv(m, acc_tol: float = ACC_TOL) -> np.ndarray:
    """Inverse of an accretive matrix (real part positive definite)."""
    m = require_square(m)
    r = re_part(m)
    lmin = float(np.min(np.linalg.eigvalsh(r)))
    if lmin <= acc_tol * max(spectral_norm(m), 1e-300):
        raise NotAccretive("real part is not positive definite")
    return np.linalg.inv(m)


def is_accretive(m, acc_tol: float = ACC_TOL) -> bool:
    m = require_square(m)
    lmin = float(np.min(np.linalg.eigvalsh(re_part(m))))
    return lmin > acc_tol * max(spectral_norm(m), 1e-300)


# ---------------------------------------------------------------------------
# Matrix JSON format: {"rows": n, "cols": m, "data": [[re, im], ...]} row-major
# ---------------------------------------------------------------------------

def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    data = [[float(z.real), float(z.imag)] for z in m.ravel(order="C")]
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": data}


def matrix_from_json(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict):
        raise DimensionMismatch("matrix JSON must be an object")
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed matrix JSON: {exc}") from exc
    if rows < 1 or cols < 1:
        raise DimensionMismatch("rows and cols must be positive")
    if len(data) != rows * cols:
        raise DimensionMismatch(
            f"data length {len(data)} != rows*cols = {rows * cols}"
        )
    flat = np.empty(rows * cols, dtype=complex)
    for i, pair in enumerate(data):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise DimensionMismatch(f"entry {i} is not a [re, im] pair")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_matrix(flat.reshape(rows, cols))


def save_matrix(path, m) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(m), fh)
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))
