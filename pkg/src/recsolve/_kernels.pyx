# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernels for the recombination inner loop.

Inner products and the affine combination accumulate in the platform's
``long double`` (80-bit on x86), then round once back to binary64. That
costs nothing measurable and removes most of the per-step rounding
injection that the feasibility ladder would otherwise have to absorb.

Accumulation order is strictly sequential, so results are a pure function
of the inputs: chunking the slot range across threads cannot change a
single bit of the output.
"""

import numpy as np

from libc.math cimport fabsl

cdef extern from "complex.h" nogil:
    long double cabsl(long double complex)

ctypedef double complex dcomplex
ctypedef long double complex lcomplex

# Smallest positive normal double; floor of the relative degeneracy test.
cdef long double TINY = 2.2250738585072014e-308


cdef Py_ssize_t _rec_core_d(double[:, ::1] U, double[:, ::1] W, double[::1] row,
                            double beta, double tol,
                            double[:, ::1] out_z, double[::1] out_t,
                            unsigned char[::1] degen,
                            Py_ssize_t start, Py_ssize_t stop) noexcept nogil:
    cdef Py_ssize_t p, q, n = row.shape[0]
    cdef Py_ssize_t n_degen = 0
    cdef long double su, sv, den, t, omt, scale, mag
    for p in range(start, stop):
        su = 0
        sv = 0
        for q in range(n):
            su = su + (<long double> row[q]) * U[p, q]
        for q in range(n):
            sv = sv + (<long double> row[q]) * W[p, q]
        den = su - sv
        scale = fabsl(su)
        mag = fabsl(sv)
        if mag > scale:
            scale = mag
        if scale < TINY:
            scale = TINY
        if fabsl(den) <= (<long double> tol) * scale:
            degen[p] = 1
            n_degen += 1
            continue
        degen[p] = 0
        t = ((<long double> beta) - sv) / den
        omt = 1 - t
        out_t[p] = <double> t
        for q in range(n):
            out_z[p, q] = <double> (t * U[p, q] + omt * W[p, q])
    return n_degen


cdef Py_ssize_t _rec_core_c(dcomplex[:, ::1] U, dcomplex[:, ::1] W, dcomplex[::1] row,
                            dcomplex beta, double tol,
                            dcomplex[:, ::1] out_z, dcomplex[::1] out_t,
                            unsigned char[::1] degen,
                            Py_ssize_t start, Py_ssize_t stop) noexcept nogil:
    cdef Py_ssize_t p, q, n = row.shape[0]
    cdef Py_ssize_t n_degen = 0
    cdef lcomplex su, sv, den, t, omt
    cdef long double scale, mag
    for p in range(start, stop):
        su = 0
        sv = 0
        for q in range(n):
            su = su + (<lcomplex> row[q]) * U[p, q]
        for q in range(n):
            sv = sv + (<lcomplex> row[q]) * W[p, q]
        den = su - sv
        scale = cabsl(su)
        mag = cabsl(sv)
        if mag > scale:
            scale = mag
        if scale < TINY:
            scale = TINY
        if cabsl(den) <= (<long double> tol) * scale:
            degen[p] = 1
            n_degen += 1
            continue
        degen[p] = 0
        t = ((<lcomplex> beta) - sv) / den
        omt = 1 - t
        out_t[p] = <dcomplex> t
        for q in range(n):
            out_z[p, q] = <dcomplex> (t * U[p, q] + omt * W[p, q])
    return n_degen


cdef Py_ssize_t _rec_bridge_d(double[:, ::1] U, double[:, ::1] W, double[::1] row,
                              double beta, double tol,
                              double[:, ::1] out_z, double[::1] out_t,
                              unsigned char[::1] degen,
                              Py_ssize_t start, Py_ssize_t stop):
    with nogil:
        return _rec_core_d(U, W, row, beta, tol, out_z, out_t, degen, start, stop)


cdef Py_ssize_t _rec_bridge_c(dcomplex[:, ::1] U, dcomplex[:, ::1] W, dcomplex[::1] row,
                              dcomplex beta, double tol,
                              dcomplex[:, ::1] out_z, dcomplex[::1] out_t,
                              unsigned char[::1] degen,
                              Py_ssize_t start, Py_ssize_t stop):
    with nogil:
        return _rec_core_c(U, W, row, beta, tol, out_z, out_t, degen, start, stop)


def rec_pairs_range(U, W, row, beta, double tol, out_z, out_t, degen,
                    Py_ssize_t start, Py_ssize_t stop):
    """Recombine slots [start, stop): z_p on segment (U_p, W_p) with row.z_p = beta.

    Writes z into out_z, the recombination parameter into out_t, and flags
    degenerate slots (|row.(U_p - W_p)| below the relative tolerance) in
    ``degen``. Returns the number of degenerate slots in the range.
    """
    if U.dtype.kind == "c":
        return _rec_bridge_c(U, W, row, complex(beta), tol, out_z, out_t, degen, start, stop)
    return _rec_bridge_d(U, W, row, float(beta), tol, out_z, out_t, degen, start, stop)


cdef double _dot_d(double[::1] u, double[::1] v, bint conj):
    cdef Py_ssize_t q, n = u.shape[0]
    cdef long double acc = 0
    with nogil:
        for q in range(n):
            acc = acc + (<long double> u[q]) * v[q]
    return <double> acc


cdef dcomplex _dot_c(dcomplex[::1] u, dcomplex[::1] v, bint conj):
    cdef Py_ssize_t q, n = u.shape[0]
    cdef lcomplex acc = 0
    with nogil:
        if conj:
            for q in range(n):
                acc = acc + (<lcomplex> u[q].conjugate()) * v[q]
        else:
            for q in range(n):
                acc = acc + (<lcomplex> u[q]) * v[q]
    return <dcomplex> acc


def dot_seq(u, v, conjugate_left=False):
    """Sequentially accumulated dot product; conjugates the left arg on demand."""
    cdef bint conj = bool(conjugate_left)
    if u.dtype.kind == "c" or v.dtype.kind == "c":
        uu = np.ascontiguousarray(u, dtype=np.complex128)
        vv = np.ascontiguousarray(v, dtype=np.complex128)
        return complex(_dot_c(uu, vv, conj))
    return float(_dot_d(np.ascontiguousarray(u, dtype=np.float64),
                        np.ascontiguousarray(v, dtype=np.float64), conj))
