"""q-numerical radius solver, classical and metric-weighted.

For a unit vector x, every admissible partner y with <x,y> = q has the form
y = conj(q) x + sqrt(1-|q|^2) z with z a unit vector orthogonal to x, and

    sup_y |<Tx, y>| = |q| |<Tx, x>| + sqrt(1-|q|^2) ||Tx - <Tx,x> x||

because <Tx, z> ranges over the full disc of radius ||Tx - <Tx,x>x|| when
dim >= 2.  The inner supremum is therefore taken in closed form and the
radius is a maximization over the unit sphere alone.

The sphere maximization runs a multistart monotone ascent: at the current
x the optimal phase/direction pair is frozen, which turns the objective
into a Hermitian quadratic plus a linear term; that surrogate is maximized
exactly on the admissible sphere slice (a trust-region secular solve), and
the step never decreases the true objective.  A derivative-free spherical
line search polishes any start the ascent leaves short of stationarity.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernel, semihilbert
from .errors import DimensionTooSmall, InvalidSpec

try:
    from . import _kernels
except ImportError:  # numba not installed; the numpy engine takes over
    _kernels = None

Q_MOD_TOL = 1e-15
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
_GRAD_BURST = 18
_GRAD_CYCLES = 3
_TOPK = 6


@dataclass(frozen=True)
class SolverCfg:
    starts: int = 32           # random multistart count
    angle_grid: int = 8        # rotation angles for eigenvector starts
    max_iter: int = 200
    rel_tol: float = 1e-10     # per-start relative improvement stop
    oracle_samples: int = 4096
    seed: int = 0


@dataclass(frozen=True)
class QPair:
    """Witness pair: unit vectors (in the A-seminorm) with <x, y>_A = q."""

    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class QNRResult:
    value: float
    witness: QPair
    oracle_lower: float
    starts: int
    converged: bool


@dataclass(frozen=True)
class PointCloud:
    """Samples of the q-numerical range with their convex-hull vertices."""

    points: np.ndarray   # complex members, sample order
    hull: tuple          # indices of hull vertices, counterclockwise


def check_q(q) -> complex:
    q = complex(q)
    if abs(q) > 1.0 + Q_MOD_TOL:
        raise InvalidSpec(f"|q| = {abs(q)} exceeds 1")
    return q


def _qc(q):
    qa = min(abs(check_q(q)), 1.0)
    c = float(np.sqrt(max(0.0, 1.0 - qa * qa)))
    return qa, c


# ---------------------------------------------------------------------------
# batched objective
# ---------------------------------------------------------------------------

def _eval_batch(tt, x, qa, c):
    """Objective, diagonal term, residual and its norm for a batch of rows."""
    tx = x @ tt.T
    g = np.einsum("mr,mr->m", x.conj(), tx)
    w = tx - g[:, None] * x
    h = np.linalg.norm(w, axis=1)
    return qa * np.abs(g) + c * h, g, w, h


def q_objective(tt, x, q) -> float:
    """Closed-form inner supremum sup_y |<T x, y>| at a fixed unit x."""
    tt = kernel.require_square(tt)
    qa, c = _qc(q)
    x = np.asarray(x, dtype=complex).reshape(1, -1)
    if x.shape[1] != tt.shape[0]:
        raise InvalidSpec("vector length does not match the matrix")
    nrm = float(np.linalg.norm(x))
    if abs(nrm - 1.0) > 1e-8:
        raise InvalidSpec(f"x must be a unit vector (norm {nrm})")
    if tt.shape[0] == 1 and qa < 1.0:
        raise DimensionTooSmall("no orthogonal direction exists in dimension 1")
    f, _, _, _ = _eval_batch(tt, x / nrm, qa, c)
    return float(f[0])


# ---------------------------------------------------------------------------
# surrogate maximization: max u*Bu + Re(b* u) over the unit sphere, batched
# ---------------------------------------------------------------------------

def _surrogate_max(bmat, bvec):
    mu, v = np.linalg.eigh(bmat)                    # ascending
    beta = np.einsum("mri,mr->mi", v.conj(), bvec) / 2.0
    mumax = mu[:, -1]
    gap = mumax[:, None] - mu                       # >= 0
    scale = np.maximum(np.abs(mumax), 1.0)
    istop = gap <= 1e-12 * scale[:, None]
    btop = np.linalg.norm(np.where(istop, beta, 0.0), axis=1)
    bnorm = np.linalg.norm(beta, axis=1)

    # interior coefficients at lambda = mu_max (hard-case candidate)
    coef0 = np.where(istop, 0.0, beta / np.where(istop, 1.0, gap))
    s0 = np.linalg.norm(coef0, axis=1)

    newton = (btop > 1e-13 * (1.0 + bnorm)) | (s0 > 1.0)
    floor = 1e-30 * scale
    lam = mumax + np.where(newton, np.maximum(bnorm, floor), 1.0)
    for _ in range(60):
        d = np.maximum(lam[:, None] - mu, floor[:, None])
        phi = np.sum((np.abs(beta) / d) ** 2, axis=1) - 1.0
        dphi = -2.0 * np.sum(np.abs(beta) ** 2 / d**3, axis=1)
        step = np.where(dphi != 0.0, phi / np.where(dphi == 0, 1.0, dphi), 0.0)
        lam_new = np.maximum(lam - step, mumax + floor)
        done = np.all(np.abs(lam_new - lam) <= 1e-15 * np.maximum(1.0, np.abs(lam)))
        lam = lam_new
        if done:
            break

    d = np.maximum(lam[:, None] - mu, floor[:, None])
    coef_newton = beta / d
    nn = np.maximum(np.linalg.norm(coef_newton, axis=1), 1e-300)
    coef_newton = coef_newton / nn[:, None]

    # hard case: fill the top eigendirection to reach the sphere
    tau = np.sqrt(np.clip(1.0 - s0**2, 0.0, None))
    fill = istop.astype(float)
    fill_norm = np.maximum(np.linalg.norm(fill, axis=1), 1.0)
    coef_hard = coef0 + (tau / fill_norm)[:, None] * fill
    hn = np.maximum(np.linalg.norm(coef_hard, axis=1), 1e-300)
    coef_hard = coef_hard / hn[:, None]

    coef = np.where(newton[:, None], coef_newton, coef_hard)
    return np.einsum("mri,mi->mr", v, coef)


def _perp_fallback(x):
    """A unit vector orthogonal to each row of x (rows assumed unit)."""
    m, r = x.shape
    e = np.zeros((m, r), dtype=complex)
    idx = np.argmin(np.abs(x), axis=1)
    e[np.arange(m), idx] = 1.0
    z = e - np.einsum("mr,mr->m", x.conj(), e)[:, None] * x
    n = np.linalg.norm(z, axis=1, keepdims=True)
    return z / np.maximum(n, 1e-300)


def _ascend(tt, x0, qa, c, max_iter, rel_tol, phi_dir=None):
    """Monotone multistart ascent; returns (f, x, converged) per start.

    With phi_dir=None the modulus objective |q||g| + c h is maximized;
    otherwise the support objective |q| Re(e^{-i phi} g) + c h.
    """
    r = tt.shape[0]
    x = x0 / np.linalg.norm(x0, axis=1, keepdims=True)
    m = x.shape[0]
    th = tt.conj().T
    eye = np.eye(r)

    def objective(xb):
        f, g, w, h = _eval_batch(tt, xb, qa, c)
        if phi_dir is not None:
            f = qa * (np.exp(-1j * phi_dir) * g).real + c * h
        return f, g, w, h

    f, g, w, h = objective(x)
    active = np.ones(m, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        if phi_dir is None:
            absg = np.abs(g)
            phase = np.where(absg > 1e-300, g / np.where(absg > 0, absg, 1.0), 1.0)
        else:
            phase = np.full(m, np.exp(1j * phi_dir))
        bmat = (qa / 2.0) * (
            phase.conj()[:, None, None] * tt[None, :, :]
            + phase[:, None, None] * th[None, :, :]
        )
        if c == 0.0 or r == 1:
            _, v = np.linalg.eigh(bmat)
            xn = v[:, :, -1]
        else:
            hsafe = h > 1e-14 * (1.0 + np.abs(g))
            z = np.where(hsafe[:, None], w / np.maximum(h, 1e-300)[:, None],
                         _perp_fallback(x))
            # Householder complement of z: columns 2..r of a unitary whose
            # first column is parallel to z
            z1 = z[:, 0]
            az = np.abs(z1)
            alpha = np.where(az > 1e-300, z1 / np.where(az > 0, az, 1.0), 1.0)
            u = z.copy()
            u[:, 0] += alpha
            un2 = np.einsum("mr,mr->m", u.conj(), u).real
            hh = eye[None, :, :] - 2.0 * u[:, :, None] * u.conj()[:, None, :] \
                / un2[:, None, None]
            qbasis = hh[:, :, 1:]
            btil = np.einsum("mri,mrs,msj->mij", qbasis.conj(), bmat, qbasis)
            btil = (btil + btil.conj().transpose(0, 2, 1)) / 2.0
            bvec = c * (z @ tt.conj())
            bvtil = np.einsum("mri,mr->mi", qbasis.conj(), bvec)
            un = _surrogate_max(btil, bvtil)
            xn = np.einsum("mri,mi->mr", qbasis, un)
            xn = xn / np.maximum(np.linalg.norm(xn, axis=1, keepdims=True), 1e-300)
        fn, gn, wn, hn = objective(xn)
        improved = fn >= f - 1e-14 * (1.0 + np.abs(f))
        upd = active & improved & (fn > f)
        keep = active & improved & (fn - f > rel_tol * np.maximum(1.0, np.abs(fn)))
        x[upd], g[upd], w[upd], h[upd], f[upd] = xn[upd], gn[upd], wn[upd], hn[upd], fn[upd]
        active = keep
    return f, x, ~active


def _grad_batch(tt, x, qa, c):
    """Objective, tangent gradient, and its squared norm for a batch of rows."""
    tx = x @ tt.T
    g = np.einsum("mr,mr->m", x.conj(), tx)
    w = tx - g[:, None] * x
    h = np.linalg.norm(w, axis=1)
    absg = np.abs(g)
    ph = np.where(absg > 1e-300, g / np.where(absg > 0, absg, 1.0), 1.0)
    f = qa * absg + c * h
    thx = x @ tt.conj()
    grad = qa * 0.5 * (ph.conj()[:, None] * tx + ph[:, None] * thx)
    if c > 0.0:
        hs = np.maximum(h, 1e-300)
        gterm = (c / (2.0 * hs))[:, None] * (
            tx @ tt.conj() - g.conj()[:, None] * tx - g[:, None] * thx)
        grad = grad + np.where((h > 1e-12 * (1.0 + absg))[:, None], gterm, 0.0)
    tang = grad - np.einsum("mr,mr->m", x.conj(), grad).real[:, None] * x
    gn2 = np.einsum("mr,mr->m", tang.conj(), tang).real
    return f, tang, gn2


def _grad_burst_np(tt, x, qa, c, iters, step0):
    """Riemannian gradient ascent with Armijo backtracking, batched in place."""
    m = x.shape[0]
    step = np.full(m, step0)
    f, tang, gn2 = _grad_batch(tt, x, qa, c)
    for _ in range(iters):
        alive = (gn2 > (3e-9 * np.maximum(1.0, f)) ** 2) & (step > 1e-13)
        if not alive.any():
            break
        acc = ~alive
        for _ in range(6):
            todo = ~acc
            if not todo.any():
                break
            xn = x + step[:, None] * tang
            xn = xn / np.linalg.norm(xn, axis=1, keepdims=True)
            fn, _, _, _ = _eval_batch(tt, xn, qa, c)
            ok = todo & (fn >= f + 0.1 * step * 2.0 * gn2)
            x[ok], f[ok] = xn[ok], fn[ok]
            step[ok] *= 1.4
            acc |= ok
            step[todo & ~ok] *= 0.3
        f, tang, gn2 = _grad_batch(tt, x, qa, c)
    return f, x


def _pipeline_numpy(tt, x0, qa, c, mm1, rel_tol):
    """Monotone phase for all starts, then gradient cycles for the leaders."""
    f, x, conv = _ascend(tt, x0, qa, c, mm1, rel_tol)
    if c > 0.0 and tt.shape[0] > 1:
        k = min(_TOPK, len(f))
        top = np.argsort(f)[-k:]
        xk = x[top].copy()
        step0 = 0.5 / max(1.0, float(np.linalg.norm(tt)))
        fbest = f[top].copy()
        for _ in range(_GRAD_CYCLES):
            _grad_burst_np(tt, xk, qa, c, _GRAD_BURST, step0)
            fm, xk, _ = _ascend(tt, xk, qa, c, 30, 1e-12)
            gained = fm > fbest * (1.0 + 1e-12)
            fbest = np.maximum(fbest, fm)
            if not gained.any():
                break
        better = fbest > f[top]
        f[top[better]] = fbest[better]
        x[top[better]] = xk[better]
        conv[top[better]] = True
    return f, x, conv


def _pipeline(tt, x0, qa, c, mm1, rel_tol):
    if _kernels is not None:
        tt = np.ascontiguousarray(tt, dtype=complex)
        x0 = np.ascontiguousarray(x0, dtype=complex)
        f, conv, xs = _kernels.radius_pipeline(
            tt, x0, qa, c, mm1, _GRAD_BURST, _GRAD_CYCLES, rel_tol)
        return f, xs, conv
    return _pipeline_numpy(tt, x0, qa, c, mm1, rel_tol)


def _grad_tangent_norm(tt, x, qa, c):
    """Riemannian gradient norm of the modulus objective at a single unit x."""
    tx = tt @ x
    g = complex(x.conj() @ tx)
    w = tx - g * x
    h = float(np.linalg.norm(w))
    absg = abs(g)
    phase = g / absg if absg > 1e-300 else 1.0
    thx = tt.conj().T @ x
    grad = qa * 0.5 * (np.conj(phase) * tx + phase * thx)
    if c > 0.0:
        if h <= 1e-12 * (1.0 + absg):
            return 0.0  # nonsmooth point; leave to the line-search polisher
        tth = tt.conj().T @ tx
        grad = grad + c / (2.0 * h) * (tth - np.conj(g) * tx - g * thx)
    tang = grad - complex(x.conj() @ grad).real * x
    return float(np.linalg.norm(tang))


def _polish(tt, x, qa, c, rng, rounds=8, directions=6):
    """Derivative-free spherical line search along random tangent directions."""
    r = tt.shape[0]
    f = float(_eval_batch(tt, x[None, :], qa, c)[0][0])
    width = 0.5

    def val_at(xc):
        xc = xc / np.linalg.norm(xc)
        return float(_eval_batch(tt, xc[None, :], qa, c)[0][0]), xc

    for _ in range(rounds):
        d = rng.standard_normal((directions, r)) + 1j * rng.standard_normal((directions, r))
        ip = d @ x.conj()
        d = d - ip[:, None] * x[None, :]
        d = d / np.maximum(np.linalg.norm(d, axis=1, keepdims=True), 1e-300)
        ts = np.linspace(-width, width, 13)
        improved = False
        for dv in d:
            cand = np.cos(ts)[:, None] * x[None, :] + np.sin(ts)[:, None] * dv[None, :]
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            fc = _eval_batch(tt, cand, qa, c)[0]
            k = int(np.argmax(fc))
            if fc[k] <= f + 1e-15 * (1.0 + abs(f)):
                continue
            a = ts[max(k - 1, 0)]
            b = ts[min(k + 1, len(ts) - 1)]
            c1, c2 = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
            f1, _ = val_at(np.cos(c1) * x + np.sin(c1) * dv)
            f2, _ = val_at(np.cos(c2) * x + np.sin(c2) * dv)
            for _ in range(40):
                if f1 < f2:
                    a, c1, f1 = c1, c2, f2
                    c2 = a + _GOLDEN * (b - a)
                    f2, _ = val_at(np.cos(c2) * x + np.sin(c2) * dv)
                else:
                    b, c2, f2 = c2, c1, f1
                    c1 = b - _GOLDEN * (b - a)
                    f1, _ = val_at(np.cos(c1) * x + np.sin(c1) * dv)
            tb = (a + b) / 2.0
            fb, xb = val_at(np.cos(tb) * x + np.sin(tb) * dv)
            if fb > f:
                f, x = fb, xb
                improved = True
        if not improved:
            width *= 0.25
            if width < 1e-5:
                break
    return f, x


def _start_block(tt, cfg, rng, n_random=None):
    """Random starts plus top eigenvectors of rotated Hermitian parts."""
    r = tt.shape[0]
    n_random = cfg.starts if n_random is None else n_random
    blocks = []
    if n_random > 0:
        xr = rng.standard_normal((n_random, r)) + 1j * rng.standard_normal((n_random, r))
        blocks.append(xr)
    k = min(r, 4)
    for j in range(cfg.angle_grid):
        ang = 2.0 * np.pi * j / max(cfg.angle_grid, 1)
        hmat = (np.exp(1j * ang) * tt + np.exp(-1j * ang) * tt.conj().T) / 2.0
        _, v = np.linalg.eigh(hmat)
        blocks.append(v[:, -k:].T.copy())
    x0 = np.concatenate(blocks, axis=0)
    return x0 / np.linalg.norm(x0, axis=1, keepdims=True)


def sampling_oracle(tt, q, samples, seed=0, return_argmax=False):
    """Lower bound on the radius: best objective over random unit vectors."""
    tt = kernel.require_square(tt)
    qa, c = _qc(q)
    r = tt.shape[0]
    if r == 1 and qa < 1.0:
        raise DimensionTooSmall("no orthogonal direction exists in dimension 1")
    rng = np.random.default_rng(seed)
    best = -np.inf
    best_x = None
    left = int(samples)
    while left > 0:
        m = min(left, 200000)
        x = rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        f, _, _, _ = _eval_batch(tt, x, qa, c)
        k = int(np.argmax(f))
        if f[k] > best:
            best, best_x = float(f[k]), x[k].copy()
        left -= m
    if best_x is None:
        best, best_x = 0.0, np.eye(r, dtype=complex)[0]
    return (best, best_x) if return_argmax else best


def _radius_core(tt, q, cfg):
    """Multistart radius of a plain matrix; returns (value, x, conv, oracle)."""
    qa, c = _qc(q)
    r = tt.shape[0]
    if r == 1:
        if qa < 1.0:
            raise DimensionTooSmall("no orthogonal direction exists in dimension 1")
        x = np.ones(1, dtype=complex)
        val = qa * abs(complex(tt[0, 0]))
        return val, x, True, val
    rng = np.random.default_rng((int(cfg.seed) & 0x7FFFFFFF, 0x51A7))
    x0 = _start_block(tt, cfg, rng)
    f, x, conv = _pipeline(tt, x0, qa, c, cfg.max_iter, cfg.rel_tol)
    best = int(np.argmax(f))
    fb, xb, cb = float(f[best]), x[best], bool(conv[best])

    oracle, xo = sampling_oracle(
        tt, q, cfg.oracle_samples,
        seed=(int(cfg.seed) & 0x7FFFFFFF, 0x0AC1E), return_argmax=True)
    if oracle > fb:
        # sampling found a better basin; ascend from there
        f2, x2, c2 = _pipeline(tt, xo[None, :].copy(), qa, c, cfg.max_iter, cfg.rel_tol)
        if float(f2[0]) > fb:
            fb, xb, cb = float(f2[0]), x2[0], bool(c2[0])

    if _grad_tangent_norm(tt, xb, qa, c) > 1e-7 * max(1.0, fb):
        fp, xp = _polish(tt, xb, qa, c, rng)
        if fp > fb:
            fb, xb = fp, xp
    return fb, xb, cb, oracle


def _witness_pair(tt, x, q):
    """Admissible pair (x, y) in the compressed space achieving the value."""
    q = check_q(q)
    qa, c = _qc(q)
    tx = tt @ x
    g = complex(x.conj() @ tx)
    if c == 0.0:
        return x, np.conj(q) * x
    w = tx - g * x
    h = float(np.linalg.norm(w))
    z = w / h if h > 1e-300 else _perp_fallback(x[None, :])[0]
    qg = q * g
    ph = qg / abs(qg) if abs(qg) > 1e-300 else 1.0
    # zhat* (T x) = ph * h, so the two contributions share one phase
    y = np.conj(q) * x + c * (np.conj(ph) * z)
    return x, y


def q_radius(space, t, q, cfg: SolverCfg | None = None) -> QNRResult:
    """q-numerical radius, A-weighted when a SemiSpace is given.

    The A-weighted radius equals the plain radius of the range-space
    compression, and the witness pair is pulled back along the isometry.
    """
    cfg = cfg or SolverCfg()
    t = kernel.require_square(t)
    q = check_q(q)
    tt = semihilbert.compress(space, t) if space is not None else t
    value, xc, converged, oracle = _radius_core(tt, q, cfg)
    xw, yw = _witness_pair(tt, xc, q)
    if space is not None:
        xw, yw = semihilbert.embed(space, xw), semihilbert.embed(space, yw)
    n_starts = cfg.starts + cfg.angle_grid * min(tt.shape[0], 4)
    return QNRResult(
        value=float(value),
        witness=QPair(x=xw, y=yw),
        oracle_lower=float(oracle),
        starts=n_starts,
        converged=converged,
    )


def classical_radius(m, n_theta: int = 256) -> float:
    """Numerical radius via the rotation sweep max_theta lmax(Re(e^{i theta} M)).

    A uniform angle grid locates the candidate maxima and golden-section
    refinement polishes the best brackets.
    """
    m = kernel.require_square(m)
    thetas = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    ph = np.exp(1j * thetas)
    hb = 0.5 * (ph[:, None, None] * m[None, :, :]
                + ph.conj()[:, None, None] * m.conj().T[None, :, :])
    vals = np.linalg.eigvalsh(hb)[:, -1]

    def support(th):
        hm = 0.5 * (np.exp(1j * th) * m + np.exp(-1j * th) * m.conj().T)
        return float(np.linalg.eigvalsh(hm)[-1])

    order = np.argsort(vals)[::-1][:4]
    best = float(vals.max())
    step = 2.0 * np.pi / n_theta
    for k in order:
        a, b = thetas[k] - step, thetas[k] + step
        c1, c2 = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
        f1, f2 = support(c1), support(c2)
        for _ in range(60):
            if f1 < f2:
                a, c1, f1 = c1, c2, f2
                c2 = a + _GOLDEN * (b - a)
                f2 = support(c2)
            else:
                b, c2, f2 = c2, c1, f1
                c1 = b - _GOLDEN * (b - a)
                f1 = support(c1)
            if b - a < 1e-12:
                break
        best = max(best, f1, f2)
    return best


# ---------------------------------------------------------------------------
# range sampling
# ---------------------------------------------------------------------------

def _hull_indices(pts: np.ndarray):
    """Convex-hull vertex indices (ccw monotone chain); degenerate-safe."""
    n = len(pts)
    if n == 0:
        return ()
    xy = np.column_stack([pts.real, pts.imag])
    order = np.lexsort((xy[:, 1], xy[:, 0]))
    uniq = []
    for i in order:
        if not uniq or np.hypot(*(xy[i] - xy[uniq[-1]])) > 1e-12:
            uniq.append(int(i))
    if len(uniq) <= 2:
        return tuple(uniq)

    def cross(o, a, b):
        return ((xy[a, 0] - xy[o, 0]) * (xy[b, 1] - xy[o, 1])
                - (xy[a, 1] - xy[o, 1]) * (xy[b, 0] - xy[o, 0]))

    lower = []
    for i in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], i) <= 1e-14:
            lower.pop()
        lower.append(i)
    upper = []
    for i in reversed(uniq):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], i) <= 1e-14:
            upper.pop()
        upper.append(i)
    return tuple(lower[:-1] + upper[:-1])


def q_range_sample(space, t, q, n_points: int, seed: int = 0,
                   cfg: SolverCfg | None = None) -> PointCloud:
    """Sample exact members of the q-numerical range.

    Random members come from random unit x and random unit z orthogonal to
    x; a directional enrichment maximizes Re(e^{-i phi} <Tx, y>) over a phi
    grid so the hull approaches the true boundary from inside.
    """
    cfg = cfg or SolverCfg()
    t = kernel.require_square(t)
    q = check_q(q)
    qa, c = _qc(q)
    tt = semihilbert.compress(space, t) if space is not None else t
    r = tt.shape[0]
    if n_points <= 0:
        return PointCloud(points=np.zeros(0, dtype=complex), hull=())
    if r == 1 and qa < 1.0:
        raise DimensionTooSmall("no orthogonal direction exists in dimension 1")
    rng = np.random.default_rng((int(seed) & 0x7FFFFFFF, 0xC10D))
    n_enrich = 0 if r == 1 else int(min(36, n_points // 4))
    n_random = n_points - n_enrich

    chunks = []
    if n_random > 0:
        x = rng.standard_normal((n_random, r)) + 1j * rng.standard_normal((n_random, r))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        tx = x @ tt.T
        g = np.einsum("mr,mr->m", x.conj(), tx)
        if r > 1 and c > 0.0:
            z = rng.standard_normal((n_random, r)) + 1j * rng.standard_normal((n_random, r))
            z -= np.einsum("mr,mr->m", x.conj(), z)[:, None] * x
            zn = np.linalg.norm(z, axis=1, keepdims=True)
            z = np.where(zn > 1e-12, z / np.maximum(zn, 1e-300), _perp_fallback(x))
            vals = q * g + c * np.einsum("mr,mr->m", z.conj(), tx)
        else:
            vals = q * g
        chunks.append(vals)

    for k in range(n_enrich):
        phi = 2.0 * np.pi * k / n_enrich
        x0 = _start_block(tt, SolverCfg(starts=4, angle_grid=2), rng)
        if _kernels is not None:
            f, xs = _kernels.support_pipeline(
                np.ascontiguousarray(tt, dtype=complex),
                np.ascontiguousarray(x0), qa, c, 80, 1e-12, phi)
        else:
            f, xs, _ = _ascend(tt, x0, qa, c, 80, 1e-12, phi_dir=phi)
        xb = xs[int(np.argmax(f))]
        txb = tt @ xb
        g = complex(xb.conj() @ txb)
        w = txb - g * xb
        h = float(np.linalg.norm(w))
        val = q * g + (c * h * np.exp(1j * phi) if c > 0.0 else 0.0)
        chunks.append(np.array([val], dtype=complex))

    points = np.concatenate(chunks)
    return PointCloud(points=points, hull=_hull_indices(points))


def point_cloud_csv(cloud: PointCloud) -> str:
    """CSV with header re,im,on_hull; one row per point in sample order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im", "on_hull"])
    hull = set(cloud.hull)
    for i, p in enumerate(cloud.points):
        writer.writerow([repr(float(p.real)), repr(float(p.imag)),
                         1 if i in hull else 0])
    return buf.getvalue()
