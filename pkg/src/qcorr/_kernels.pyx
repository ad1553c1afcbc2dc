# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled objective kernels; algorithmic twin of _kernels_py.

Hot objectives restrict to measured dimension <= 4, unmeasured
dimension 2, POVM/ensemble sizes <= 16, which covers every search the
package runs on its acceptance paths. The python module handles all
other shapes. Fixed-size scratch arrays use row stride 4 (max measured
dimension) and 16 rows (max POVM/ensemble size).
"""

from libc.math cimport cos, log2, sin, sqrt

BACKEND = "compiled"

PENALTY = 64.0

cdef double _PIVOT_TOL = 1e-12
cdef double _PROB_TOL = 1e-14
cdef double _PENALTY = 64.0


cdef inline double _entropy2_terms(double a, double b, double cre, double cim) nogil:
    cdef double p = a + b
    if p < _PROB_TOL:
        return 0.0
    cdef double half = 0.5 * (a - b)
    cdef double disc = sqrt(half * half + cre * cre + cim * cim)
    cdef double l1 = 0.5 * p + disc
    cdef double l2 = 0.5 * p - disc
    cdef double out = p * log2(p)
    if l1 > _PROB_TOL:
        out -= l1 * log2(l1)
    if l2 > _PROB_TOL:
        out -= l2 * log2(l2)
    return out


cdef bint _gram_schmidt(double complex * z, int n, int d, int stride) nogil:
    """Orthonormalize the first d columns (length n, row stride given)."""
    cdef int i, j, k, rep
    cdef double complex ip
    cdef double nrm
    for j in range(d):
        for rep in range(2):
            for i in range(j):
                ip = 0
                for k in range(n):
                    ip += z[k * stride + i].conjugate() * z[k * stride + j]
                for k in range(n):
                    z[k * stride + j] = z[k * stride + j] - ip * z[k * stride + i]
        nrm = 0.0
        for k in range(n):
            nrm += (z[k * stride + j].real * z[k * stride + j].real
                    + z[k * stride + j].imag * z[k * stride + j].imag)
        nrm = sqrt(nrm)
        if nrm < _PIVOT_TOL:
            return 0
        for k in range(n):
            z[k * stride + j] = z[k * stride + j] / nrm
    return 1


cdef inline double _measure_row(double complex[:, :, :, :] rho_t,
                                double complex * v, int d_m) nogil:
    """Entropy contribution of one measurement vector (applied conjugated)."""
    cdef int a, b
    cdef double complex b00 = 0, b11 = 0, b01 = 0, w
    for a in range(d_m):
        for b in range(d_m):
            w = v[a].conjugate() * v[b]
            b00 += w * rho_t[a, 0, b, 0]
            b01 += w * rho_t[a, 0, b, 1]
            b11 += w * rho_t[a, 1, b, 1]
    return _entropy2_terms(b00.real, b11.real, b01.real, b01.imag)


def povm_objective(double[:] x, double complex[:, :, :, :] rho_t,
                   int d_m, int d_o, int n_out):
    cdef double complex z[16][4]
    cdef double complex v[4]
    cdef int half = n_out * d_m
    cdef int k, a
    cdef double total = 0.0
    if d_o != 2 or d_m > 4 or n_out > 16:
        raise ValueError("compiled povm_objective limited to d_o=2, d_m<=4, n<=16")
    for k in range(n_out):
        for a in range(d_m):
            z[k][a] = x[k * d_m + a] + 1j * x[half + k * d_m + a]
    if not _gram_schmidt(&z[0][0], n_out, d_m, 4):
        return _PENALTY
    for k in range(n_out):
        for a in range(d_m):
            v[a] = z[k][a].conjugate()
        total += _measure_row(rho_t, v, d_m)
    return total


cdef void _jacobi_eig(double complex * a, double * w, double complex * vec,
                      int n, int stride) nogil:
    """Cyclic Jacobi for a Hermitian matrix; eigenvectors in vec columns."""
    cdef int p, q, i, sweep
    cdef double off, app, aqq, tau, t, c, s, m
    cdef double complex eip, tmp1, tmp2
    for p in range(n):
        for q in range(n):
            vec[p * stride + q] = 1.0 if p == q else 0.0
    for sweep in range(60):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += (a[p * stride + q].real * a[p * stride + q].real
                        + a[p * stride + q].imag * a[p * stride + q].imag)
        if off < 1e-28:
            break
        for p in range(n):
            for q in range(p + 1, n):
                m = sqrt(a[p * stride + q].real * a[p * stride + q].real
                         + a[p * stride + q].imag * a[p * stride + q].imag)
                if m < 1e-150:
                    continue
                eip = a[p * stride + q] / m
                app = a[p * stride + p].real
                aqq = a[q * stride + q].real
                tau = (aqq - app) / (2.0 * m)
                if tau >= 0:
                    t = -1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # A <- A U with U[p,p]=U[q,q]=c, U[p,q]=-s*eip, U[q,p]=s*conj(eip)
                for i in range(n):
                    tmp1 = a[i * stride + p]
                    tmp2 = a[i * stride + q]
                    a[i * stride + p] = c * tmp1 + s * eip.conjugate() * tmp2
                    a[i * stride + q] = -s * eip * tmp1 + c * tmp2
                # A <- U^dag A
                for i in range(n):
                    tmp1 = a[p * stride + i]
                    tmp2 = a[q * stride + i]
                    a[p * stride + i] = c * tmp1 + s * eip * tmp2
                    a[q * stride + i] = -s * eip.conjugate() * tmp1 + c * tmp2
                # V <- V U
                for i in range(n):
                    tmp1 = vec[i * stride + p]
                    tmp2 = vec[i * stride + q]
                    vec[i * stride + p] = c * tmp1 + s * eip.conjugate() * tmp2
                    vec[i * stride + q] = -s * eip * tmp1 + c * tmp2
    for p in range(n):
        w[p] = a[p * stride + p].real


def projective_objective(double[:] x, double complex[:, :, :, :] rho_t,
                         int d_m, int d_o):
    cdef double complex h[4][4]
    cdef double complex vec[4][4]
    cdef double complex u[4][4]
    cdef double complex v[4]
    cdef double w[4]
    cdef int i, j, k, a
    cdef double total = 0.0
    cdef double complex ph
    if d_o != 2 or d_m > 4:
        raise ValueError("compiled projective_objective limited to d_o=2, d_m<=4")
    k = 0
    for i in range(d_m):
        h[i][i] = x[k]
        k += 1
    for i in range(d_m):
        for j in range(i + 1, d_m):
            h[i][j] = x[k] + 1j * x[k + 1]
            h[j][i] = x[k] - 1j * x[k + 1]
            k += 2
    _jacobi_eig(&h[0][0], w, &vec[0][0], d_m, 4)
    # U = V diag(e^{iw}) V^dag; columns are the measurement basis
    for i in range(d_m):
        for j in range(d_m):
            u[i][j] = 0
    for k in range(d_m):
        ph = cos(w[k]) + 1j * sin(w[k])
        for i in range(d_m):
            for j in range(d_m):
                u[i][j] = u[i][j] + vec[i][k] * ph * vec[j][k].conjugate()
    for k in range(d_m):
        for a in range(d_m):
            v[a] = u[a][k]
        total += _measure_row(rho_t, v, d_m)
    return total


def ensemble_objective(double[:] x, double complex[:, :] phi,
                       int d_a, int d_b, int m, int r):
    cdef double complex z[16][4]
    cdef double complex psi[32]
    cdef int half = m * r
    cdef int k, i, a
    cdef int dim = d_a * d_b
    cdef double complex b00, b11, b01
    cdef double total = 0.0
    if d_b != 2 or m > 16 or r > 4 or dim > 32:
        raise ValueError("compiled ensemble_objective limited to d_b=2, m<=16, r<=4")
    for k in range(m):
        for i in range(r):
            z[k][i] = x[k * r + i] + 1j * x[half + k * r + i]
    if not _gram_schmidt(&z[0][0], m, r, 4):
        return _PENALTY
    for k in range(m):
        for a in range(dim):
            psi[a] = 0
        for i in range(r):
            for a in range(dim):
                psi[a] = psi[a] + phi[a, i] * z[k][i]
        b00 = 0
        b11 = 0
        b01 = 0
        for a in range(d_a):
            b00 += psi[2 * a].conjugate() * psi[2 * a]
            b11 += psi[2 * a + 1].conjugate() * psi[2 * a + 1]
            b01 += psi[2 * a].conjugate() * psi[2 * a + 1]
        total += _entropy2_terms(b00.real, b11.real, b01.real, b01.imag)
    return total
