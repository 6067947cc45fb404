# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled master-equation right-hand side.

Operates on the density tensor (n_a, n_b, n_c, n_a', n_b', n_c') row by row
along the last (contiguous) axis: for each of the first five indices the
applicable Hamiltonian hops, quadratic-drive shifts, and dissipator terms
are resolved once, then applied as short scaled row additions over raw
double pairs (re, im). Every Hamiltonian term carries a purely imaginary
prefactor and the dissipator a purely real one, so the specialised update
loops below do half the arithmetic of a generic complex multiply.
Mathematically identical to the pure-numpy fallback kernel; exists because
the oracle integrator calls this tens of thousands of times per run.
"""

import numpy as np

ctypedef double complex zdouble


cdef inline void _axpy_im(double* o, const double* s, double c, Py_ssize_t n) noexcept nogil:
    """out += (i c) * src over n complex elements stored as (re, im) pairs."""
    cdef Py_ssize_t k
    for k in range(n):
        o[2 * k] = o[2 * k] - c * s[2 * k + 1]
        o[2 * k + 1] = o[2 * k + 1] + c * s[2 * k]


cdef inline void _axpy_re(double* o, const double* s, double c, Py_ssize_t n) noexcept nogil:
    """out += c * src over n complex elements stored as (re, im) pairs."""
    cdef Py_ssize_t k
    for k in range(2 * n):
        o[k] = o[k] + c * s[k]


def liouville_rhs(zdouble[:, :, :, :, :, ::1] rho,
                  zdouble[:, :, :, :, :, ::1] out,
                  double gamma, double delta, double j, double omega,
                  double delta_a, double delta_c,
                  double[::1] sq, double[::1] sqb2):
    """out = -i[H, rho] + gamma (2 b rho b† - b†b rho - rho b†b).

    sq[n] = sqrt(n) and sqb2[n] = sqrt(n(n-1)) must cover n up to
    max(dims) + 1.
    """
    cdef Py_ssize_t da = rho.shape[0], db = rho.shape[1], dc = rho.shape[2]
    cdef Py_ssize_t st4 = dc
    cdef Py_ssize_t st3 = db * dc
    cdef Py_ssize_t st2 = da * st3
    cdef Py_ssize_t st1 = dc * st2
    cdef Py_ssize_t st0 = db * st1

    cdef const double* rp = <const double*> <const void*> &rho[0, 0, 0, 0, 0, 0]
    cdef double* op = <double*> <void*> &out[0, 0, 0, 0, 0, 0]

    cdef Py_ssize_t ia, ib, ic, ja, jb, jc, base
    cdef double half_om = 0.5 * omega
    cdef bint has_j = j != 0.0
    cdef bint has_om = omega != 0.0
    cdef double d_re, d_im, c, w
    cdef double* orow
    cdef const double* rrow
    cdef const double* srow

    with nogil:
        for ia in range(da):
            for ib in range(db):
                for ic in range(dc):
                    for ja in range(da):
                        for jb in range(db):
                            base = (((((ia * db) + ib) * dc + ic) * da + ja) * db + jb) * dc
                            orow = op + 2 * base
                            rrow = rp + 2 * base
                            d_re = -gamma * (ib + jb)
                            d_im = -(delta_a * (ia - ja) + delta * (ib - jb)
                                     + delta_c * ic)
                            # out = (d_re + i (d_im + delta_c jc)) * rho
                            for jc in range(dc):
                                w = d_im + delta_c * jc
                                orow[2 * jc] = d_re * rrow[2 * jc] - w * rrow[2 * jc + 1]
                                orow[2 * jc + 1] = d_re * rrow[2 * jc + 1] + w * rrow[2 * jc]

                            if has_j:
                                # -i J (a†b + b†a + b†c + c†b) rho
                                if ia >= 1 and ib + 1 < db:
                                    _axpy_im(orow, rp + 2 * (base - st0 + st1),
                                             -j * sq[ia] * sq[ib + 1], dc)
                                if ib >= 1 and ia + 1 < da:
                                    _axpy_im(orow, rp + 2 * (base + st0 - st1),
                                             -j * sq[ib] * sq[ia + 1], dc)
                                if ib >= 1 and ic + 1 < dc:
                                    _axpy_im(orow, rp + 2 * (base - st1 + st2),
                                             -j * sq[ib] * sq[ic + 1], dc)
                                if ic >= 1 and ib + 1 < db:
                                    _axpy_im(orow, rp + 2 * (base + st1 - st2),
                                             -j * sq[ic] * sq[ib + 1], dc)
                                # +i J rho (a†b + b†a) on the primed a, b axes
                                if jb >= 1 and ja + 1 < da:
                                    _axpy_im(orow, rp + 2 * (base + st3 - st4),
                                             j * sq[ja + 1] * sq[jb], dc)
                                if ja >= 1 and jb + 1 < db:
                                    _axpy_im(orow, rp + 2 * (base - st3 + st4),
                                             j * sq[jb + 1] * sq[ja], dc)
                                # +i J rho (b†c + c†b): these shift the primed c index
                                if jb + 1 < db:
                                    c = j * sq[jb + 1]
                                    srow = rp + 2 * (base + st4)
                                    for jc in range(1, dc):
                                        w = c * sq[jc]
                                        orow[2 * jc] = orow[2 * jc] - w * srow[2 * jc - 1]
                                        orow[2 * jc + 1] = orow[2 * jc + 1] + w * srow[2 * jc - 2]
                                if jb >= 1:
                                    c = j * sq[jb]
                                    srow = rp + 2 * (base - st4)
                                    for jc in range(dc - 1):
                                        w = c * sq[jc + 1]
                                        orow[2 * jc] = orow[2 * jc] - w * srow[2 * jc + 3]
                                        orow[2 * jc + 1] = orow[2 * jc + 1] + w * srow[2 * jc + 2]

                            if has_om:
                                # -i (omega/2)(b†b† + bb) rho
                                if ib >= 2:
                                    _axpy_im(orow, rp + 2 * (base - 2 * st1),
                                             -half_om * sqb2[ib], dc)
                                if ib + 2 < db:
                                    _axpy_im(orow, rp + 2 * (base + 2 * st1),
                                             -half_om * sqb2[ib + 2], dc)
                                # +i rho (omega/2)(b†b† + bb)
                                if jb + 2 < db:
                                    _axpy_im(orow, rp + 2 * (base + 2 * st4),
                                             half_om * sqb2[jb + 2], dc)
                                if jb >= 2:
                                    _axpy_im(orow, rp + 2 * (base - 2 * st4),
                                             half_om * sqb2[jb], dc)

                            if ib + 1 < db and jb + 1 < db:
                                _axpy_re(orow, rp + 2 * (base + st1 + st4),
                                         2.0 * gamma * sq[ib + 1] * sq[jb + 1], dc)
    return None
