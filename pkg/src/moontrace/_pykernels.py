"""Pure-Python implementations of the hot kernels.

These are the reference versions; ``_ckernels`` (Cython) must agree with them
exactly on integer input and to working precision on the pentagonal sum.
"""

from __future__ import annotations

import mpmath


def convolve_trunc(a, b, n):
    """First ``n`` coefficients of the Cauchy product of two integer lists."""
    la = len(a)
    lb = len(b)
    out = [0] * n
    for i in range(min(la, n)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            out[i + j] += ai * b[j]
    return out


def pentagonal_sum(q, nterms, prec):
    """sum_{|k| <= nterms} (-1)^k q^(k(3k-1)/2) at ``prec`` bits.

    ``q`` is an mpmath mpc (or anything mpmath can coerce).  Returns an mpc.
    """
    with mpmath.workprec(prec):
        q = mpmath.mpc(q)
        q3 = q * q * q
        total = mpmath.mpc(1)
        # exponents k(3k-1)/2 and k(3k+1)/2 advance by 3k+1 and 3k+2
        pos = mpmath.mpc(1)
        neg = mpmath.mpc(1)
        step_pos = q
        step_neg = q * q
        sign = -1
        for _ in range(nterms):
            pos *= step_pos
            neg *= step_neg
            if sign < 0:
                total -= pos + neg
            else:
                total += pos + neg
            sign = -sign
            step_pos *= q3
            step_neg *= q3
        return total
