"""Matrix means of accretive matrices via integral representations.

A mean is driven by a probability measure nu on [0, 1]: the mean of A and
B is the integral of the weighted harmonic means A !_s B against nu.  The
same machinery evaluates an operator monotone function f on an accretive
matrix through f(A) = integral of ((1-s) I + s A^{-1})^{-1} d nu_f(s).

Densities with endpoint singularities s^p (1-s)^m (p, m > -1) are handled
by Gauss-Jacobi rules matched to the exponents; a tanh substitution over a
truncated line provides an independent second path used for validation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from . import kernel
from .errors import InvalidSpec, NotAccretive, QuadratureNotConverged

MASS_TOL = 1e-10
SCALAR_PROBE_XS = (0.5, 1.0, 2.0, 10.0)
SCALAR_PROBE_TOL = 1e-8
CONV_TOL = 1e-8


@dataclass(frozen=True)
class QuadCfg:
    nodes: int = 64        # inner rule size
    outer_nodes: int = 32  # outer rule size for nested integrals
    trunc: float = 40.0    # log-domain truncation for the geometric-mean integral

    def __post_init__(self):
        if self.nodes < 4:
            raise InvalidSpec("nodes must be at least 4")


@dataclass(frozen=True)
class Density:
    """Density coefficient * s^s_exponent * (1-s)^one_minus_s_exponent on (0,1)."""

    s_exponent: float
    one_minus_s_exponent: float
    coefficient: float

    def __post_init__(self):
        if self.s_exponent <= -1.0 or self.one_minus_s_exponent <= -1.0:
            raise InvalidSpec("density exponents must exceed -1")
        if self.coefficient <= 0.0:
            raise InvalidSpec("density coefficient must be positive")


@dataclass(frozen=True)
class MeasureSpec:
    """Atoms plus an optional Jacobi-type density; total mass must be 1."""

    atoms: tuple = ()
    density: Density | None = None

    def __post_init__(self):
        for s, w in self.atoms:
            if not (0.0 <= s <= 1.0):
                raise InvalidSpec(f"atom location {s} outside [0, 1]")
            if w <= 0.0:
                raise InvalidSpec("atom weights must be positive")
        mass = sum(w for _, w in self.atoms)
        if self.density is not None:
            s, w = _density_rule(self.density, 64)
            mass += float(np.sum(w))
        if abs(mass - 1.0) > MASS_TOL:
            raise InvalidSpec(f"total measure mass {mass} is not 1")


@dataclass(frozen=True)
class MonotoneFn:
    """Operator monotone function with its representing measure."""

    id: str
    scalar: callable
    measure: MeasureSpec
    param: float | None = None


@lru_cache(maxsize=256)
def _jacobi_rule(n, alpha, beta):
    with np.errstate(invalid="ignore", divide="ignore"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            u, w = roots_jacobi(n, alpha, beta)
    return u, w


def _density_rule(density: Density, nodes: int):
    """Nodes s_i in (0,1) and weights integrating g against the density."""
    p = density.s_exponent
    m = density.one_minus_s_exponent
    u, w = _jacobi_rule(int(nodes), m, p)
    s = (1.0 + u) / 2.0
    scale = density.coefficient * 2.0 ** (-(p + m + 1.0))
    return s, scale * w


def _density_rule_tanh(density: Density, nodes: int):
    """Fallback rule: s = (1 + tanh v)/2 over a truncated line.

    Independent of the Jacobi path; used to cross-check densities.
    """
    p = density.s_exponent
    m = density.one_minus_s_exponent
    decay = min(p + 1.0, m + 1.0)
    vmax = 40.0 / max(decay, 0.05)
    panels = 16
    per = max(8, int(nodes) // 4)
    un, uw = np.polynomial.legendre.leggauss(per)
    edges = np.linspace(-vmax, vmax, panels + 1)
    vs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        vs.append((b - a) / 2.0 * un + (a + b) / 2.0)
        ws.append((b - a) / 2.0 * uw)
    v = np.concatenate(vs)
    w = np.concatenate(ws)
    ch = np.cosh(v)
    s = np.exp(v) / (2.0 * ch)
    one_minus = np.exp(-v) / (2.0 * ch)
    dens = density.coefficient * s**p * one_minus**m / (2.0 * ch**2)
    return s, w * dens


def measure_rule(measure: MeasureSpec, nodes: int):
    """Discretization (s_i, w_i) of the measure: exact atoms + density rule."""
    ss = [np.array([s for s, _ in measure.atoms])]
    ww = [np.array([w for _, w in measure.atoms])]
    if measure.density is not None:
        s, w = _density_rule(measure.density, nodes)
        ss.append(s)
        ww.append(w)
    return np.concatenate(ss), np.concatenate(ww)


def measure_scalar_probe(measure: MeasureSpec, x, nodes: int = 64):
    """Evaluate integral of ((1-s) + s/x)^{-1} d nu(s) for a scalar x."""
    s, w = measure_rule(measure, nodes)
    return complex(np.sum(w / ((1.0 - s) + s / x)))


# ---------------------------------------------------------------------------
# monotone function registry
# ---------------------------------------------------------------------------

def _power_measure(t: float) -> MeasureSpec:
    return MeasureSpec(density=Density(
        s_exponent=t - 1.0,
        one_minus_s_exponent=-t,
        coefficient=float(np.sin(t * np.pi) / np.pi),
    ))


def _validate_fn(fn: MonotoneFn) -> MonotoneFn:
    if abs(fn.scalar(1.0) - 1.0) > 1e-12:
        raise InvalidSpec(f"monotone function {fn.id!r} violates f(1) = 1")
    for x in SCALAR_PROBE_XS:
        quad = measure_scalar_probe(fn.measure, x)
        ref = complex(fn.scalar(x))
        if abs(quad - ref) > SCALAR_PROBE_TOL * max(1.0, abs(ref)):
            raise InvalidSpec(
                f"measure of {fn.id!r} fails the scalar probe at x={x}: "
                f"{quad} vs {ref}")
    return fn


@lru_cache(maxsize=64)
def monotone_fn(name: str) -> MonotoneFn:
    """Named operator monotone functions: power:t, identity, one, arithmetic."""
    if name.startswith("power:"):
        t = float(name.split(":", 1)[1])
        if not (0.0 < t < 1.0):
            raise InvalidSpec("power exponent must lie in (0, 1)")
        return _validate_fn(MonotoneFn(
            id=name, scalar=lambda x, t=t: x**t,
            measure=_power_measure(t), param=t))
    if name == "identity":
        return _validate_fn(MonotoneFn(
            id=name, scalar=lambda x: x, measure=MeasureSpec(atoms=((1.0, 1.0),))))
    if name == "one":
        return _validate_fn(MonotoneFn(
            id=name, scalar=lambda x: 1.0 + 0.0 * x,
            measure=MeasureSpec(atoms=((0.0, 1.0),))))
    if name == "arithmetic":
        return _validate_fn(MonotoneFn(
            id=name, scalar=lambda x: (1.0 + x) / 2.0,
            measure=MeasureSpec(atoms=((0.0, 0.5), (1.0, 0.5)))))
    raise InvalidSpec(f"unknown monotone function {name!r}")


def monotone_fn_from_dict(obj: dict) -> MonotoneFn:
    """User-supplied measure: {"atoms": [[s, w], ...], "density": {...}}."""
    atoms = tuple((float(s), float(w)) for s, w in obj.get("atoms", ()))
    density = None
    if obj.get("density") is not None:
        d = obj["density"]
        density = Density(
            s_exponent=float(d["s_exponent"]),
            one_minus_s_exponent=float(d["one_minus_s_exponent"]),
            coefficient=float(d["coefficient"]),
        )
    measure = MeasureSpec(atoms=atoms, density=density)

    def scalar(x, _m=measure):
        return measure_scalar_probe(_m, x)

    return MonotoneFn(id="custom", scalar=scalar, measure=measure)


# ---------------------------------------------------------------------------
# matrix means
# ---------------------------------------------------------------------------

def _check_accretive(*mats):
    out = []
    for m in mats:
        m = kernel.require_square(m)
        if not kernel.is_accretive(m):
            raise NotAccretive("input is not accretive")
        out.append(m)
    if len({m.shape for m in out}) != 1:
        raise InvalidSpec("inputs must share one dimension")
    return out


def harmonic(a, b, s: float):
    """Weighted harmonic mean ((1-s) A^{-1} + s B^{-1})^{-1}; endpoints exact."""
    a, b = _check_accretive(a, b)
    if not (0.0 <= s <= 1.0):
        raise InvalidSpec("s must lie in [0, 1]")
    if s == 0.0:
        return a.copy()
    if s == 1.0:
        return b.copy()
    return np.linalg.inv((1.0 - s) * kernel.accretive_inv(a)
                         + s * kernel.accretive_inv(b))


def _harmonic_nodes(ainv, binv, s, w):
    """Sum of w_i (A !_{s_i} B) with endpoint conventions, batched."""
    n = ainv.shape[0]
    out = np.zeros((n, n), dtype=complex)
    interior = (s > 0.0) & (s < 1.0)
    if interior.any():
        si = s[interior]
        stack = (1.0 - si)[:, None, None] * ainv[None, :, :] \
            + si[:, None, None] * binv[None, :, :]
        inv = np.linalg.inv(stack)
        out += np.einsum("k,kij->ij", w[interior], inv)
    for sv, extreme in ((0.0, ainv), (1.0, binv)):
        mask = s == sv
        if mask.any():
            out += float(np.sum(w[mask])) * np.linalg.inv(extreme)
    return out


def sigma_f(a, b, f: MonotoneFn, cfg: QuadCfg | None = None):
    """Matrix mean driven by the representing measure of f.

    Atoms are evaluated exactly; the density part is integrated by a rule
    matched to its endpoint exponents, with a node-doubling convergence
    check.
    """
    cfg = cfg or QuadCfg()
    a, b = _check_accretive(a, b)
    ainv = kernel.accretive_inv(a)
    binv = kernel.accretive_inv(b)

    def at(nodes):
        s, w = measure_rule(f.measure, nodes)
        return _harmonic_nodes(ainv, binv, s, w)

    coarse = at(cfg.nodes)
    if f.measure.density is None:
        return coarse
    fine = at(2 * cfg.nodes)
    if kernel.spectral_norm(fine - coarse) > CONV_TOL * max(
            1.0, kernel.spectral_norm(fine)):
        raise QuadratureNotConverged(
            "doubling the density rule moved the mean beyond tolerance")
    return fine


def monotone_apply(f: MonotoneFn, a, cfg: QuadCfg | None = None):
    """f(A) for accretive A via the harmonic-mean representation of f."""
    cfg = cfg or QuadCfg()
    (a,) = _check_accretive(a)
    return sigma_f(np.eye(a.shape[0], dtype=complex), a, f, cfg)


def drury_geomean(a, b, cfg: QuadCfg | None = None):
    """Geometric mean of accretive matrices via the inverse-integral form.

    The defining integral is evaluated after the substitution t = e^u on
    [-trunc, trunc] with composite Gauss-Legendre panels; the truncation
    error decays like e^{-trunc}.
    """
    cfg = cfg or QuadCfg()
    a, b = _check_accretive(a, b)

    def quad(per_panel):
        un, uw = np.polynomial.legendre.leggauss(per_panel)
        edges = np.linspace(-cfg.trunc, cfg.trunc, 17)
        total = np.zeros_like(a)
        for lo, hi in zip(edges[:-1], edges[1:]):
            u = (hi - lo) / 2.0 * un + (lo + hi) / 2.0
            w = (hi - lo) / 2.0 * uw
            stack = np.exp(u)[:, None, None] * a[None, :, :] \
                + np.exp(-u)[:, None, None] * b[None, :, :]
            total = total + np.einsum("k,kij->ij", w, np.linalg.inv(stack))
        return np.linalg.inv(2.0 / np.pi * total)

    per = max(8, cfg.nodes // 4)
    coarse = quad(per)
    fine = quad(2 * per)
    if kernel.spectral_norm(fine - coarse) > CONV_TOL * max(
            1.0, kernel.spectral_norm(fine)):
        raise QuadratureNotConverged(
            "doubling the geometric-mean rule moved the result beyond tolerance")
    return fine


def weighted_geomean(a, b, t: float, cfg: QuadCfg | None = None):
    """Weighted geometric mean; endpoints follow the conventions #_0 = A, #_1 = B."""
    if not (0.0 <= t <= 1.0):
        raise InvalidSpec("t must lie in [0, 1]")
    a, b = _check_accretive(a, b)
    if t == 0.0:
        return a.copy()
    if t == 1.0:
        return b.copy()
    return sigma_f(a, b, monotone_fn(f"power:{t}"), cfg)


def log_mean(a, b, cfg: QuadCfg | None = None):
    """Logarithmic mean: outer quadrature of the weighted geometric mean over t."""
    cfg = cfg or QuadCfg()
    a, b = _check_accretive(a, b)
    ainv = kernel.accretive_inv(a)
    binv = kernel.accretive_inv(b)

    def at(outer, inner):
        tn, tw = np.polynomial.legendre.leggauss(outer)
        ts = (tn + 1.0) / 2.0
        ws = tw / 2.0
        total = np.zeros_like(a)
        for t, w in zip(ts, ws):
            s, sw = _density_rule(_power_measure(t).density, inner)
            total = total + w * _harmonic_nodes(ainv, binv, s, sw)
        return total

    coarse = at(cfg.outer_nodes, cfg.nodes)
    fine = at(2 * cfg.outer_nodes, 2 * cfg.nodes)
    if kernel.spectral_norm(fine - coarse) > CONV_TOL * max(
            1.0, kernel.spectral_norm(fine)):
        raise QuadratureNotConverged(
            "doubling the nested rule moved the logarithmic mean beyond tolerance")
    return fine


def heinz(a, b, t: float, cfg: QuadCfg | None = None):
    """Heinz mean (A #_t B + A #_{1-t} B)/2; symmetric in t <-> 1-t."""
    return (weighted_geomean(a, b, t, cfg) + weighted_geomean(a, b, 1.0 - t, cfg)) / 2.0


# ---------------------------------------------------------------------------
# scalar means
# ---------------------------------------------------------------------------

SCALAR_KINDS = ("arithmetic", "harmonic", "geometric", "log", "heinz")


def scalar_mean(kind: str, a: float, b: float, t: float | None = None) -> float:
    """Closed-form scalar means; t weights the mean when applicable."""
    if a <= 0.0 or b <= 0.0:
        raise InvalidSpec("scalar means require positive arguments")
    t = 0.5 if t is None else float(t)
    if not (0.0 <= t <= 1.0):
        raise InvalidSpec("t must lie in [0, 1]")
    if kind == "arithmetic":
        return (1.0 - t) * a + t * b
    if kind == "harmonic":
        return 1.0 / ((1.0 - t) / a + t / b)
    if kind == "geometric":
        return a ** (1.0 - t) * b**t
    if kind == "log":
        if abs(a - b) <= 1e-14 * max(a, b):
            return 0.5 * (a + b)
        return (a - b) / (np.log(a) - np.log(b))
    if kind == "heinz":
        return 0.5 * (a ** (1.0 - t) * b**t + a**t * b ** (1.0 - t))
    raise InvalidSpec(f"unknown scalar mean {kind!r}")


def scalar_sigma(f: MonotoneFn, a: float, b: float) -> float:
    """Scalar instance of the f-mean: a * f(b / a)."""
    if a <= 0.0 or b <= 0.0:
        raise InvalidSpec("scalar means require positive arguments")
    return float(np.real(a * f.scalar(b / a)))
