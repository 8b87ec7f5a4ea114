# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: classical energies and state-vector propagation.

Every function here has a numpy twin in ``_fallback.py`` with the same
signature; ``_backend`` picks one at import time.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, cos, sin, ceil

cnp.import_array()

ctypedef double complex cplx


def diagonal_energies(int n, const cnp.int64_t[::1] pi, const cnp.int64_t[::1] pj,
                      const double[::1] pv, const double[::1] h):
    """Energy of every basis index, pairs first then fields (fixed order)."""
    cdef Py_ssize_t dim = (<Py_ssize_t>1) << n
    cdef Py_ssize_t npairs = pv.shape[0]
    out_arr = np.empty(dim, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t z, p
    cdef int i
    cdef double e, si, sij
    for z in range(dim):
        e = 0.0
        for p in range(npairs):
            sij = 1.0 - 2.0 * (((z >> pi[p]) ^ (z >> pj[p])) & 1)
            e += pv[p] * sij
        for i in range(n):
            si = 1.0 - 2.0 * ((z >> i) & 1)
            e += h[i] * si
        out[z] = e
    return out_arr


cdef inline void _hx(const double* diag, int n, Py_ssize_t dim, double a,
                     double dscale, double shift, const cplx* x, cplx* out) noexcept nogil:
    # out = a * sum_i X_i x + (dscale * diag - shift) * x
    cdef Py_ssize_t z
    cdef int i
    cdef cplx acc
    for z in range(dim):
        acc = 0.0
        for i in range(n):
            acc = acc + x[z ^ ((<Py_ssize_t>1) << i)]
        out[z] = a * acc + (dscale * diag[z] - shift) * x[z]


def apply_hamiltonian(const double[::1] diag, int n, double s, const cplx[::1] psi):
    out_arr = np.empty(psi.shape[0], dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    with nogil:
        _hx(&diag[0], n, psi.shape[0], 1.0 - s, s, 0.0, &psi[0], &out[0])
    return out_arr


def rk4_steps(const double[::1] diag, int n, cplx[::1] psi, const double[::1] svals,
              double dt, double center):
    """Advance ``psi`` in place by ``(len(svals) - 1) // 2`` RK4 steps.

    ``svals`` holds the schedule at step start, midpoint, start, midpoint,
    ..., end.  The diagonal is shifted by ``s * center`` (a global phase).
    """
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t nsteps = (svals.shape[0] - 1) // 2
    worka = np.empty((5, dim), dtype=np.complex128)
    cdef cplx[:, ::1] work = worka
    cdef cplx* k1 = &work[0, 0]
    cdef cplx* k2 = &work[1, 0]
    cdef cplx* k3 = &work[2, 0]
    cdef cplx* k4 = &work[3, 0]
    cdef cplx* tmp = &work[4, 0]
    cdef cplx* y = &psi[0]
    cdef const double* d = &diag[0]
    cdef cplx mi_half = -0.5j * dt
    cdef cplx mi_full = -1j * dt
    cdef cplx mi_sixth = -1j * dt / 6.0
    cdef Py_ssize_t k, z
    cdef double s0, sh, s1
    with nogil:
        for k in range(nsteps):
            s0 = svals[2 * k]
            sh = svals[2 * k + 1]
            s1 = svals[2 * k + 2]
            _hx(d, n, dim, 1.0 - s0, s0, s0 * center, y, k1)
            for z in range(dim):
                tmp[z] = y[z] + mi_half * k1[z]
            _hx(d, n, dim, 1.0 - sh, sh, sh * center, tmp, k2)
            for z in range(dim):
                tmp[z] = y[z] + mi_half * k2[z]
            _hx(d, n, dim, 1.0 - sh, sh, sh * center, tmp, k3)
            for z in range(dim):
                tmp[z] = y[z] + mi_full * k3[z]
            _hx(d, n, dim, 1.0 - s1, s1, s1 * center, tmp, k4)
            for z in range(dim):
                y[z] = y[z] + mi_sixth * (k1[z] + 2.0 * k2[z] + 2.0 * k3[z] + k4[z])


cdef int _bessel_series(double x, double[::1] coef) noexcept nogil:
    # J_0(x) .. J_{K-1}(x) by Miller's backward recurrence; returns K, the
    # number of terms above 1e-18.  coef must hold at least 1.5 x + 32 entries.
    cdef int m = <int>(1.5 * x) + 30
    cdef int k, kmax
    if m % 2 == 1:
        m += 1
    if m > coef.shape[0] - 1:
        m = coef.shape[0] - 1
    cdef double jp, jc, jn, norm
    if x < 1e-300:
        coef[0] = 1.0
        return 1
    for k in range(m + 1):
        coef[k] = 0.0
    jp = 0.0
    jc = 1e-300
    norm = 0.0
    for k in range(m, 0, -1):
        jn = (2.0 * k / x) * jc - jp
        jp = jc
        jc = jn
        coef[k - 1] = jc
        if fabs(jc) > 1e250:
            for kmax in range(k - 1, m + 1):
                coef[kmax] = coef[kmax] * 1e-250
            jp = jp * 1e-250
            jc = jc * 1e-250
    norm = coef[0]
    for k in range(2, m + 1, 2):
        norm += 2.0 * coef[k]
    for k in range(m + 1):
        coef[k] = coef[k] / norm
    kmax = 1
    for k in range(m, -1, -1):
        if fabs(coef[k]) > 1e-18:
            kmax = k + 1
            break
    return kmax


def bessel_series(double x, int length):
    """First ``length`` Bessel values J_k(x), exposed for testing."""
    arr = np.zeros(max(length, <int>(1.5 * x) + 32), dtype=np.float64)
    _bessel_series(x, arr)
    return arr[:length].copy()


def chebyshev_steps(const double[::1] diag, int n, cplx[::1] psi, const double[::1] svals,
                    double tau, double dmin, double dmax):
    """Apply ``exp(-i tau H(s))`` in place for each ``s`` in ``svals``.

    Each exponential uses a Chebyshev expansion on the spectral interval
    bounded by ``[-(1-s) n + s dmin, (1-s) n + s dmax]``.
    """
    cdef Py_ssize_t dim = psi.shape[0]
    cdef Py_ssize_t nexp = svals.shape[0]
    cdef double xmax = 0.0
    cdef double lo, hi, r, c, s, inv_r
    cdef Py_ssize_t q, z
    cdef int k, nterms
    for q in range(nexp):
        s = svals[q]
        r = 0.5 * (((1.0 - s) * n + s * dmax) - (-(1.0 - s) * n + s * dmin))
        if tau * r > xmax:
            xmax = tau * r
    cdef int mstart = <int>(1.5 * xmax) + 32
    coef_a = np.zeros(mstart + 1, dtype=np.float64)
    cdef double[::1] coef = coef_a
    worka = np.empty((4, dim), dtype=np.complex128)
    cdef cplx[:, ::1] work = worka
    cdef cplx* v0 = &work[0, 0]
    cdef cplx* v1 = &work[1, 0]
    cdef cplx* v2 = &work[2, 0]
    cdef cplx* acc = &work[3, 0]
    cdef cplx* t
    cdef cplx* y = &psi[0]
    cdef const double* d = &diag[0]
    cdef cplx phase, ipow, ck
    with nogil:
        for q in range(nexp):
            s = svals[q]
            lo = -(1.0 - s) * n + s * dmin
            hi = (1.0 - s) * n + s * dmax
            c = 0.5 * (hi + lo)
            r = 0.5 * (hi - lo)
            if r < 1e-12:
                r = 1e-12
            nterms = _bessel_series(tau * r, coef)
            inv_r = 1.0 / r
            # Chebyshev vectors of Ht = (H - c) / r: v0 = psi, v1 = Ht psi
            for z in range(dim):
                v0[z] = y[z]
                acc[z] = coef[0] * y[z]
            if nterms > 1:
                _hx(d, n, dim, (1.0 - s) * inv_r, s * inv_r, c * inv_r, v0, v1)
                ipow = -1j
                ck = 2.0 * coef[1] * ipow
                for z in range(dim):
                    acc[z] = acc[z] + ck * v1[z]
                for k in range(2, nterms):
                    _hx(d, n, dim, 2.0 * (1.0 - s) * inv_r, 2.0 * s * inv_r, 2.0 * c * inv_r, v1, v2)
                    ipow = ipow * (-1j)
                    ck = 2.0 * coef[k] * ipow
                    for z in range(dim):
                        v2[z] = v2[z] - v0[z]
                        acc[z] = acc[z] + ck * v2[z]
                    t = v0
                    v0 = v1
                    v1 = v2
                    v2 = t
            phase = cos(tau * c) - 1j * sin(tau * c)
            for z in range(dim):
                y[z] = phase * acc[z]
