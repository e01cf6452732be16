"""numba kernels for the radius ascent (per-start loops, small matrices).

The algorithm mirrors the batched numpy engine in qnr.py: a monotone
surrogate-maximization phase, then gradient bursts with Armijo steps and a
final monotone pass for the leading starts.  Kept in a separate module so
qnr.py degrades gracefully when numba is unavailable.
"""

import numpy as np
from numba import njit

_PAR = dict(cache=True, fastmath=False)


@njit(**_PAR)
def _objective(tt, x, qa, c, use_phi, phi):
    r = tt.shape[0]
    tx = np.dot(tt, x)
    g = 0.0j
    for i in range(r):
        g += np.conj(x[i]) * tx[i]
    h2 = 0.0
    for i in range(r):
        w = tx[i] - g * x[i]
        h2 += (w.real * w.real + w.imag * w.imag)
    h = np.sqrt(h2)
    if use_phi:
        f = qa * (np.exp(-1j * phi) * g).real + c * h
    else:
        f = qa * abs(g) + c * h
    return f, g, tx, h


@njit(**_PAR)
def _mm_step(tt, th, x, qa, c, g, tx, h, use_phi, phi):
    """One surrogate-maximization step; returns the proposed unit vector."""
    r = tt.shape[0]
    if use_phi:
        ph = np.exp(1j * phi)
    else:
        ag = abs(g)
        ph = g / ag if ag > 1e-300 else 1.0 + 0.0j
    bmat = np.empty((r, r), dtype=np.complex128)
    for i in range(r):
        for j in range(r):
            bmat[i, j] = (qa / 2.0) * (np.conj(ph) * tt[i, j] + ph * np.conj(tt[j, i]))
    if c == 0.0 or r == 1:
        _, v = np.linalg.eigh(bmat)
        xn = np.ascontiguousarray(v[:, r - 1])
        return xn
    # z = residual direction (or a fallback orthogonal unit vector)
    z = np.empty(r, dtype=np.complex128)
    if h > 1e-14 * (1.0 + abs(g)):
        for i in range(r):
            z[i] = (tx[i] - g * x[i]) / h
    else:
        kmin = 0
        amin = 1e300
        for i in range(r):
            a = abs(x[i])
            if a < amin:
                amin = a
                kmin = i
        ip = np.conj(x[kmin])
        for i in range(r):
            z[i] = -ip * x[i]
        z[kmin] += 1.0
        zn = 0.0
        for i in range(r):
            zn += z[i].real ** 2 + z[i].imag ** 2
        zn = np.sqrt(zn)
        if zn < 1e-300:
            return x.copy()
        for i in range(r):
            z[i] /= zn
    # Householder complement of z
    az = abs(z[0])
    alpha = z[0] / az if az > 1e-300 else 1.0 + 0.0j
    u = z.copy()
    u[0] += alpha
    un2 = 0.0
    for i in range(r):
        un2 += u[i].real ** 2 + u[i].imag ** 2
    qb = np.empty((r, r - 1), dtype=np.complex128)
    for j in range(1, r):
        cj = np.conj(u[j]) * (2.0 / un2)
        for i in range(r):
            qb[i, j - 1] = -u[i] * cj
        qb[j, j - 1] += 1.0
    # projected quadratic and linear terms
    bq = np.dot(bmat, qb)
    btil = np.dot(qb.conj().T, bq)
    for i in range(r - 1):
        for j in range(i, r - 1):
            m = 0.5 * (btil[i, j] + np.conj(btil[j, i]))
            btil[i, j] = m
            btil[j, i] = np.conj(m)
    bvec = np.dot(th, z)
    for i in range(r):
        bvec[i] *= c
    bt = np.dot(qb.conj().T, bvec)
    # secular solve: max u*Bu + Re(b*u) on the sphere
    mu, v = np.linalg.eigh(btil)
    k = r - 1
    beta = np.dot(v.conj().T, bt)
    for i in range(k):
        beta[i] *= 0.5
    mumax = mu[k - 1]
    scale = max(abs(mumax), 1.0)
    bnorm = 0.0
    btop = 0.0
    s0sq = 0.0
    for i in range(k):
        b2 = beta[i].real ** 2 + beta[i].imag ** 2
        bnorm += b2
        if mumax - mu[i] <= 1e-12 * scale:
            btop += b2
        else:
            d = mumax - mu[i]
            s0sq += b2 / (d * d)
    bnorm = np.sqrt(bnorm)
    btop = np.sqrt(btop)
    coef = np.empty(k, dtype=np.complex128)
    if btop > 1e-13 * (1.0 + bnorm) or s0sq > 1.0:
        floor = 1e-30 * scale
        lam = mumax + max(bnorm, floor)
        for _ in range(60):
            phiv = -1.0
            dphi = 0.0
            for i in range(k):
                d = max(lam - mu[i], floor)
                b2 = beta[i].real ** 2 + beta[i].imag ** 2
                phiv += b2 / (d * d)
                dphi -= 2.0 * b2 / (d * d * d)
            if dphi == 0.0:
                break
            lam_new = lam - phiv / dphi
            if lam_new < mumax + floor:
                lam_new = mumax + floor
            if abs(lam_new - lam) <= 1e-15 * max(1.0, abs(lam)):
                lam = lam_new
                break
            lam = lam_new
        nrm = 0.0
        for i in range(k):
            d = max(lam - mu[i], floor)
            coef[i] = beta[i] / d
            nrm += coef[i].real ** 2 + coef[i].imag ** 2
        nrm = np.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1.0
        for i in range(k):
            coef[i] /= nrm
    else:
        ntop = 0
        for i in range(k):
            if mumax - mu[i] <= 1e-12 * scale:
                coef[i] = 0.0
                ntop += 1
            else:
                coef[i] = beta[i] / (mumax - mu[i])
        tau = np.sqrt(max(1.0 - s0sq, 0.0) / max(ntop, 1))
        for i in range(k):
            if mumax - mu[i] <= 1e-12 * scale:
                coef[i] = tau
        nrm = 0.0
        for i in range(k):
            nrm += coef[i].real ** 2 + coef[i].imag ** 2
        nrm = np.sqrt(nrm)
        if nrm < 1e-300:
            nrm = 1.0
        for i in range(k):
            coef[i] /= nrm
    uu = np.dot(v, coef)
    xn = np.dot(qb, uu)
    nn = 0.0
    for i in range(r):
        nn += xn[i].real ** 2 + xn[i].imag ** 2
    nn = np.sqrt(nn)
    if nn < 1e-300:
        return x.copy()
    for i in range(r):
        xn[i] /= nn
    return xn


@njit(**_PAR)
def _mm_ascend(tt, th, x, qa, c, iters, rel_tol, use_phi, phi):
    f, g, tx, h = _objective(tt, x, qa, c, use_phi, phi)
    converged = False
    for _ in range(iters):
        xn = _mm_step(tt, th, x, qa, c, g, tx, h, use_phi, phi)
        fn, gn, txn, hn = _objective(tt, xn, qa, c, use_phi, phi)
        if fn >= f - 1e-14 * (1.0 + abs(f)):
            if fn - f <= rel_tol * max(1.0, abs(fn)):
                if fn > f:
                    x[:] = xn
                    f = fn
                converged = True
                break
            x[:] = xn
            f, g, tx, h = fn, gn, txn, hn
        else:
            converged = True
            break
    return f, converged


@njit(**_PAR)
def _gradient(tt, th, tth, x, qa, c):
    r = tt.shape[0]
    tx = np.dot(tt, x)
    g = 0.0j
    for i in range(r):
        g += np.conj(x[i]) * tx[i]
    h2 = 0.0
    for i in range(r):
        w = tx[i] - g * x[i]
        h2 += w.real * w.real + w.imag * w.imag
    h = np.sqrt(h2)
    ag = abs(g)
    f = qa * ag + c * h
    ph = g / ag if ag > 1e-300 else 1.0 + 0.0j
    thx = np.dot(th, x)
    grad = np.empty(r, dtype=np.complex128)
    for i in range(r):
        grad[i] = qa * 0.5 * (np.conj(ph) * tx[i] + ph * thx[i])
    if c > 0.0 and h > 1e-12 * (1.0 + ag):
        tthx = np.dot(tth, x)
        s = c / (2.0 * h)
        for i in range(r):
            grad[i] += s * (tthx[i] - np.conj(g) * tx[i] - g * thx[i])
    ip = 0.0
    for i in range(r):
        ip += (np.conj(x[i]) * grad[i]).real
    gn2 = 0.0
    for i in range(r):
        grad[i] -= ip * x[i]
        gn2 += grad[i].real ** 2 + grad[i].imag ** 2
    return f, grad, gn2


@njit(**_PAR)
def _grad_burst(tt, th, tth, x, qa, c, iters, step0):
    r = tt.shape[0]
    step = step0
    f, grad, gn2 = _gradient(tt, th, tth, x, qa, c)
    xn = np.empty(r, dtype=np.complex128)
    for _ in range(iters):
        if gn2 <= (3e-9 * max(1.0, f)) ** 2 or step <= 1e-13:
            break
        accepted = False
        for _ in range(6):
            nn = 0.0
            for i in range(r):
                xn[i] = x[i] + step * grad[i]
                nn += xn[i].real ** 2 + xn[i].imag ** 2
            nn = np.sqrt(nn)
            for i in range(r):
                xn[i] /= nn
            fn, _, _, _ = _objective(tt, xn, qa, c, False, 0.0)
            if fn >= f + 0.1 * step * 2.0 * gn2:
                x[:] = xn
                f = fn
                step *= 1.4
                accepted = True
                break
            step *= 0.3
        if not accepted:
            break
        f, grad, gn2 = _gradient(tt, th, tth, x, qa, c)
    return f


@njit(**_PAR)
def radius_pipeline(tt, x0, qa, c, mm1, gb, cycles, rel_tol):
    """Full multistart pipeline; returns (values, conv flags, updated starts)."""
    m, r = x0.shape
    th = np.ascontiguousarray(tt.conj().T)
    tth = np.dot(th, tt)
    fvals = np.empty(m)
    conv = np.zeros(m, dtype=np.bool_)
    xs = x0.copy()
    for s in range(m):
        f, cf = _mm_ascend(tt, th, xs[s], qa, c, mm1, rel_tol, False, 0.0)
        fvals[s] = f
        conv[s] = cf
    if c > 0.0 and r > 1:
        # polish the leading starts with gradient bursts + monotone passes
        nrm = 0.0
        for i in range(r):
            for j in range(r):
                nrm += tt[i, j].real ** 2 + tt[i, j].imag ** 2
        step0 = 0.5 / max(1.0, np.sqrt(nrm))
        order = np.argsort(fvals)
        kk = min(6, m)
        for jj in range(kk):
            s = order[m - 1 - jj]
            x = xs[s].copy()
            fbest = fvals[s]
            for _ in range(cycles):
                _grad_burst(tt, th, tth, x, qa, c, gb, step0)
                f3, _ = _mm_ascend(tt, th, x, qa, c, 30, 1e-12, False, 0.0)
                if f3 <= fbest * (1.0 + 1e-12):
                    if f3 > fbest:
                        fbest = f3
                    break
                fbest = f3
            if fbest > fvals[s]:
                fvals[s] = fbest
                xs[s] = x
                conv[s] = True
    return fvals, conv, xs


@njit(**_PAR)
def support_pipeline(tt, x0, qa, c, iters, rel_tol, phi):
    """Multistart ascent of the directional objective qa*Re(e^{-i phi} g) + c h."""
    m, r = x0.shape
    th = np.ascontiguousarray(tt.conj().T)
    fvals = np.empty(m)
    xs = x0.copy()
    for s in range(m):
        f, _ = _mm_ascend(tt, th, xs[s], qa, c, iters, rel_tol, True, phi)
        fvals[s] = f
    return fvals, xs
