"""Pure numpy versions of the routines in ``_kernels.pyx``.

Same signatures and in-place semantics.  The enumeration path is
vectorized and reasonably quick; the propagators loop over steps in Python
and are meant for small problems or for platforms without a compiler.
"""
import numpy as np
from scipy import special


def diagonal_energies(n, pi, pj, pv, h):
    z = np.arange(1 << n, dtype=np.int64)
    e = np.zeros(1 << n, dtype=np.float64)
    for i, j, v in zip(pi, pj, pv):
        sij = 1.0 - 2.0 * (((z >> i) ^ (z >> j)) & 1)
        e += v * sij
    for i in range(n):
        si = 1.0 - 2.0 * ((z >> i) & 1)
        e += h[i] * si
    return e


def _flip_table(n):
    z = np.arange(1 << n, dtype=np.int64)
    return [z ^ (1 << i) for i in range(n)]


def _hmul(diag, flips, s, shift, x):
    acc = np.zeros_like(x)
    for idx in flips:
        acc += x[idx]
    return (1.0 - s) * acc + (s * diag - shift) * x


def apply_hamiltonian(diag, n, s, psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return _hmul(np.asarray(diag), _flip_table(n), s, 0.0, psi)


def rk4_steps(diag, n, psi, svals, dt, center):
    diag = np.asarray(diag)
    flips = _flip_table(n)
    nsteps = (len(svals) - 1) // 2
    y = np.array(psi, dtype=np.complex128)
    for k in range(nsteps):
        s0, sh, s1 = svals[2 * k], svals[2 * k + 1], svals[2 * k + 2]
        k1 = -1j * _hmul(diag, flips, s0, s0 * center, y)
        k2 = -1j * _hmul(diag, flips, sh, sh * center, y + 0.5 * dt * k1)
        k3 = -1j * _hmul(diag, flips, sh, sh * center, y + 0.5 * dt * k2)
        k4 = -1j * _hmul(diag, flips, s1, s1 * center, y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    psi[:] = y


def bessel_series(x, length):
    return special.jv(np.arange(length), x)


def chebyshev_steps(diag, n, psi, svals, tau, dmin, dmax):
    diag = np.asarray(diag)
    flips = _flip_table(n)
    y = np.array(psi, dtype=np.complex128)
    for s in svals:
        lo = -(1.0 - s) * n + s * dmin
        hi = (1.0 - s) * n + s * dmax
        c = 0.5 * (hi + lo)
        r = max(0.5 * (hi - lo), 1e-12)
        x = tau * r
        coef = special.jv(np.arange(int(1.5 * x) + 32), x)
        nterms = int(np.nonzero(np.abs(coef) > 1e-18)[0].max()) + 1 if x > 0 else 1

        def ht(v):
            return _hmul(diag, flips, s, c, v) / r

        v0 = y
        acc = coef[0] * v0
        if nterms > 1:
            v1 = ht(v0)
            acc = acc + 2.0 * coef[1] * (-1j) * v1
            for k in range(2, nterms):
                v2 = 2.0 * ht(v1) - v0
                acc = acc + 2.0 * coef[k] * (-1j) ** k * v2
                v0, v1 = v1, v2
        y = np.exp(-1j * tau * c) * acc
    psi[:] = y
