# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the hot kernels in ``_pykernels``.

The pentagonal sum runs on MPFR; values cross the boundary as mpmath
(man, exp) pairs so no precision is lost in either direction.
"""

from libc.stdlib cimport malloc, free

import mpmath
from mpmath.libmp import from_man_exp


cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct mpz_t[1]
    void mpz_init(mpz_t)
    void mpz_clear(mpz_t)
    int mpz_set_str(mpz_t, const char *, int)
    char *mpz_get_str(char *, int, const mpz_t)
    size_t mpz_sizeinbase(const mpz_t, int)


cdef extern from "mpfr.h":
    ctypedef struct __mpfr_struct:
        pass
    ctypedef __mpfr_struct mpfr_t[1]
    ctypedef long mpfr_prec_t
    ctypedef long mpfr_exp_t
    ctypedef enum mpfr_rnd_t:
        MPFR_RNDN
    void mpfr_init2(mpfr_t, mpfr_prec_t)
    void mpfr_clear(mpfr_t)
    int mpfr_set(mpfr_t, const mpfr_t, mpfr_rnd_t)
    int mpfr_set_ui(mpfr_t, unsigned long, mpfr_rnd_t)
    int mpfr_set_z_2exp(mpfr_t, const mpz_t, mpfr_exp_t, mpfr_rnd_t)
    mpfr_exp_t mpfr_get_z_2exp(mpz_t, const mpfr_t)
    int mpfr_add(mpfr_t, const mpfr_t, const mpfr_t, mpfr_rnd_t)
    int mpfr_sub(mpfr_t, const mpfr_t, const mpfr_t, mpfr_rnd_t)
    int mpfr_mul(mpfr_t, const mpfr_t, const mpfr_t, mpfr_rnd_t)
    int mpfr_zero_p(const mpfr_t)


def convolve_trunc(list a, list b, Py_ssize_t n):
    """First ``n`` coefficients of the Cauchy product of two integer lists."""
    cdef Py_ssize_t la = len(a), lb = len(b), i, j, top
    cdef list out = [0] * n
    cdef object ai
    for i in range(min(la, n)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            out[i + j] = out[i + j] + ai * b[j]
    return out


cdef void _load(mpfr_t dst, tuple t):
    # t is an mpmath _mpf_ tuple (sign, man, exp, bc)
    cdef mpz_t z
    sign, man, exp, bc = t
    if man == 0:
        mpfr_set_ui(dst, 0, MPFR_RNDN)
        return
    s = format(-man if sign else man, "x").encode("ascii")
    mpz_init(z)
    mpz_set_str(z, s, 16)
    mpfr_set_z_2exp(dst, z, exp, MPFR_RNDN)
    mpz_clear(z)


cdef tuple _store(mpfr_t src, long prec):
    cdef mpz_t z
    cdef mpfr_exp_t e
    cdef char *buf
    cdef size_t size
    if mpfr_zero_p(src):
        return from_man_exp(0, 0)
    mpz_init(z)
    e = mpfr_get_z_2exp(z, src)
    size = mpz_sizeinbase(z, 16) + 3
    buf = <char *>malloc(size)
    mpz_get_str(buf, 16, z)
    man = int(buf.decode("ascii"), 16)
    free(buf)
    mpz_clear(z)
    return from_man_exp(man, e, prec, "n")


cdef inline void _cmul(mpfr_t xr, mpfr_t xi, mpfr_t yr, mpfr_t yi,
                       mpfr_t t1, mpfr_t t2, mpfr_t t3):
    # (xr + i xi) *= (yr + i yi)
    mpfr_mul(t1, xr, yr, MPFR_RNDN)
    mpfr_mul(t2, xi, yi, MPFR_RNDN)
    mpfr_mul(t3, xr, yi, MPFR_RNDN)
    mpfr_sub(t1, t1, t2, MPFR_RNDN)
    mpfr_mul(t2, xi, yr, MPFR_RNDN)
    mpfr_add(xi, t3, t2, MPFR_RNDN)
    mpfr_set(xr, t1, MPFR_RNDN)


def pentagonal_sum(q, long nterms, long prec):
    """sum_{|k| <= nterms} (-1)^k q^(k(3k-1)/2), evaluated with MPFR."""
    cdef mpfr_t qr, qi, q3r, q3i, pr, pi_, nr, ni, spr, spi, snr, sni
    cdef mpfr_t tr, ti, t1, t2, t3
    cdef long k
    cdef int sign = -1
    cdef long wp = prec + 20
    q = mpmath.mpc(q)
    mpfr_init2(qr, wp); mpfr_init2(qi, wp)
    mpfr_init2(q3r, wp); mpfr_init2(q3i, wp)
    mpfr_init2(pr, wp); mpfr_init2(pi_, wp)
    mpfr_init2(nr, wp); mpfr_init2(ni, wp)
    mpfr_init2(spr, wp); mpfr_init2(spi, wp)
    mpfr_init2(snr, wp); mpfr_init2(sni, wp)
    mpfr_init2(tr, wp); mpfr_init2(ti, wp)
    mpfr_init2(t1, wp); mpfr_init2(t2, wp); mpfr_init2(t3, wp)

    _load(qr, q.real._mpf_)
    _load(qi, q.imag._mpf_)
    # q3 = q^3
    mpfr_set(q3r, qr, MPFR_RNDN); mpfr_set(q3i, qi, MPFR_RNDN)
    _cmul(q3r, q3i, qr, qi, t1, t2, t3)
    _cmul(q3r, q3i, qr, qi, t1, t2, t3)
    mpfr_set_ui(pr, 1, MPFR_RNDN); mpfr_set_ui(pi_, 0, MPFR_RNDN)
    mpfr_set_ui(nr, 1, MPFR_RNDN); mpfr_set_ui(ni, 0, MPFR_RNDN)
    mpfr_set_ui(tr, 1, MPFR_RNDN); mpfr_set_ui(ti, 0, MPFR_RNDN)
    mpfr_set(spr, qr, MPFR_RNDN); mpfr_set(spi, qi, MPFR_RNDN)
    mpfr_set(snr, qr, MPFR_RNDN); mpfr_set(sni, qi, MPFR_RNDN)
    _cmul(snr, sni, qr, qi, t1, t2, t3)

    for k in range(nterms):
        _cmul(pr, pi_, spr, spi, t1, t2, t3)
        _cmul(nr, ni, snr, sni, t1, t2, t3)
        if sign < 0:
            mpfr_sub(tr, tr, pr, MPFR_RNDN); mpfr_sub(ti, ti, pi_, MPFR_RNDN)
            mpfr_sub(tr, tr, nr, MPFR_RNDN); mpfr_sub(ti, ti, ni, MPFR_RNDN)
        else:
            mpfr_add(tr, tr, pr, MPFR_RNDN); mpfr_add(ti, ti, pi_, MPFR_RNDN)
            mpfr_add(tr, tr, nr, MPFR_RNDN); mpfr_add(ti, ti, ni, MPFR_RNDN)
        sign = -sign
        _cmul(spr, spi, q3r, q3i, t1, t2, t3)
        _cmul(snr, sni, q3r, q3i, t1, t2, t3)

    re = _store(tr, prec)
    im = _store(ti, prec)
    mpfr_clear(qr); mpfr_clear(qi); mpfr_clear(q3r); mpfr_clear(q3i)
    mpfr_clear(pr); mpfr_clear(pi_); mpfr_clear(nr); mpfr_clear(ni)
    mpfr_clear(spr); mpfr_clear(spi); mpfr_clear(snr); mpfr_clear(sni)
    mpfr_clear(tr); mpfr_clear(ti)
    mpfr_clear(t1); mpfr_clear(t2); mpfr_clear(t3)
    return mpmath.mp.make_mpc((re, im))
