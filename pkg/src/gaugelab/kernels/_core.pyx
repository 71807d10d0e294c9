# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled compute kernels; same contract as gaugelab.kernels.reference."""

import numpy as np

cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32


cdef void _field_strength_into(const double[:, :, ::1] A, double g,
                               const i64[:, ::1] ip, const i64[:, ::1] im,
                               const i32[::1] pi, const i32[::1] pj,
                               const i32[::1] fa, const i32[::1] fb,
                               const i32[::1] fc, const double[::1] fv,
                               double[:, :, ::1] F) noexcept nogil:
    cdef Py_ssize_t ns = A.shape[0], ng = A.shape[2]
    cdef Py_ssize_t npair = pi.shape[0], nf = fa.shape[0]
    cdef Py_ssize_t s, p, a, t, i, j
    cdef i64 spi, smi, spj, smj
    for s in range(ns):
        for p in range(npair):
            i = pi[p]
            j = pj[p]
            spi = ip[s, i]
            smi = im[s, i]
            spj = ip[s, j]
            smj = im[s, j]
            for a in range(ng):
                F[s, p, a] = (0.5 * (A[spi, j, a] - A[smi, j, a])
                              - 0.5 * (A[spj, i, a] - A[smj, i, a]))
            if g != 0.0:
                for t in range(nf):
                    F[s, p, fc[t]] -= g * fv[t] * A[s, i, fa[t]] * A[s, j, fb[t]]


cdef void _eom_rhs_into(const double[:, :, ::1] A, double g,
                        const i64[:, ::1] ip, const i64[:, ::1] im,
                        const i32[:, ::1] pidx, const double[:, ::1] psign,
                        const i32[::1] fa, const i32[::1] fb,
                        const i32[::1] fc, const double[::1] fv,
                        const double[:, :, ::1] F,
                        double[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t ns = A.shape[0], nd = A.shape[1], ng = A.shape[2]
    cdef Py_ssize_t nf = fa.shape[0]
    cdef Py_ssize_t s, i, j, a, t, p
    cdef double sg
    cdef i64 sp, sm
    for s in range(ns):
        for i in range(nd):
            for a in range(ng):
                out[s, i, a] = 0.0
        for i in range(nd):
            for j in range(nd):
                if i == j:
                    continue
                p = pidx[j, i]
                sg = psign[j, i]
                sp = ip[s, j]
                sm = im[s, j]
                for a in range(ng):
                    out[s, i, a] += sg * 0.5 * (F[sp, p, a] - F[sm, p, a])
                if g != 0.0:
                    for t in range(nf):
                        out[s, i, fc[t]] -= (g * fv[t] * A[s, j, fa[t]]
                                             * (sg * F[s, p, fb[t]]))


def field_strength(const double[:, :, ::1] A, double g, tuple tables):
    ip, im, pi, pj, pidx, psign, fa, fb, fc, fv = tables
    F = np.zeros((A.shape[0], pi.shape[0], A.shape[2]))
    _field_strength_into(A, g, ip, im, pi, pj, fa, fb, fc, fv, F)
    return F


def eom_rhs(const double[:, :, ::1] A, double g, tuple tables):
    ip, im, pi, pj, pidx, psign, fa, fb, fc, fv = tables
    F = np.zeros((A.shape[0], pi.shape[0], A.shape[2]))
    out = np.zeros((A.shape[0], A.shape[1], A.shape[2]))
    cdef double[:, :, ::1] Fv = F
    cdef double[:, :, ::1] outv = out
    _field_strength_into(A, g, ip, im, pi, pj, fa, fb, fc, fv, Fv)
    _eom_rhs_into(A, g, ip, im, pidx, psign, fa, fb, fc, fv, Fv, outv)
    return out


def gauss(const double[:, :, ::1] A, const double[:, :, ::1] E, double g,
          tuple tables):
    ip_o, im_o, pi, pj, pidx, psign, fa_o, fb_o, fc_o, fv_o = tables
    cdef const i64[:, ::1] ip = ip_o
    cdef const i64[:, ::1] im = im_o
    cdef const i32[::1] fa = fa_o
    cdef const i32[::1] fb = fb_o
    cdef const i32[::1] fc = fc_o
    cdef const double[::1] fv = fv_o
    G = np.zeros((A.shape[0], A.shape[2]))
    cdef double[:, ::1] Gv = G
    cdef Py_ssize_t ns = A.shape[0], nd = A.shape[1], ng = A.shape[2]
    cdef Py_ssize_t nf = fa.shape[0]
    cdef Py_ssize_t s, i, a, t
    cdef i64 sp, sm
    with nogil:
        for s in range(ns):
            for i in range(nd):
                sp = ip[s, i]
                sm = im[s, i]
                for a in range(ng):
                    Gv[s, a] += 0.5 * (E[sp, i, a] - E[sm, i, a])
                if g != 0.0:
                    for t in range(nf):
                        Gv[s, fc[t]] -= g * fv[t] * A[s, i, fa[t]] * E[s, i, fb[t]]
    return G


def leapfrog_steps(double[:, :, ::1] A, double[:, :, ::1] E, Py_ssize_t n,
                   double dt, double g, tuple tables):
    """In-place kick-drift-kick steps; -1 on success, else the bad step index."""
    if n <= 0:
        return -1
    ip_o, im_o, pi_o, pj_o, pidx_o, psign_o, fa_o, fb_o, fc_o, fv_o = tables
    cdef const i64[:, ::1] ip = ip_o
    cdef const i64[:, ::1] im = im_o
    cdef const i32[::1] pi = pi_o
    cdef const i32[::1] pj = pj_o
    cdef const i32[:, ::1] pidx = pidx_o
    cdef const double[:, ::1] psign = psign_o
    cdef const i32[::1] fa = fa_o
    cdef const i32[::1] fb = fb_o
    cdef const i32[::1] fc = fc_o
    cdef const double[::1] fv = fv_o

    cdef Py_ssize_t ns = A.shape[0], nd = A.shape[1], ng = A.shape[2]
    F = np.zeros((ns, pi.shape[0], ng))
    R = np.zeros((ns, nd, ng))
    cdef double[:, :, ::1] Fv = F
    cdef double[:, :, ::1] Rv = R

    cdef Py_ssize_t total = ns * nd * ng
    cdef double* pA = &A[0, 0, 0]
    cdef double* pE = &E[0, 0, 0]
    cdef double* pR = &Rv[0, 0, 0]
    cdef double half = 0.5 * dt
    cdef double tot
    cdef Py_ssize_t s, q
    cdef Py_ssize_t bad = -1

    with nogil:
        _field_strength_into(A, g, ip, im, pi, pj, fa, fb, fc, fv, Fv)
        _eom_rhs_into(A, g, ip, im, pidx, psign, fa, fb, fc, fv, Fv, Rv)
        for s in range(n):
            for q in range(total):
                pE[q] += half * pR[q]
            for q in range(total):
                pA[q] += dt * pE[q]
            _field_strength_into(A, g, ip, im, pi, pj, fa, fb, fc, fv, Fv)
            _eom_rhs_into(A, g, ip, im, pidx, psign, fa, fb, fc, fv, Fv, Rv)
            for q in range(total):
                pE[q] += half * pR[q]
            tot = 0.0
            for q in range(total):
                tot += pA[q]
            for q in range(total):
                tot += pE[q]
            if not isfinite(tot):
                bad = s
                break
    return bad
