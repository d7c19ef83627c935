# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse-polynomial kernels; semantics match dvarkit._purekernel.

Coefficients stay arbitrary Python objects (Fraction), so the win over
the pure kernels is loop and tuple-construction overhead, not bignum
arithmetic.
"""

BACKEND = "cython"


def poly_mul(dict a, dict b):
    """Multiply two term dicts, dropping cancelled terms."""
    cdef dict out = {}
    cdef Py_ssize_t n, k
    cdef tuple ea, eb, e
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        n = len(ea)
        for eb, cb in b.items():
            e = tuple([ea[k] + eb[k] for k in range(n)])
            c = out.get(e)
            if c is None:
                out[e] = ca * cb
            else:
                c = c + ca * cb
                if c:
                    out[e] = c
                else:
                    del out[e]
    return out


def poly_addmul(dict dst, dict src, coeff, shift=None):
    """In place: dst += coeff * x^shift * src.  Returns dst."""
    cdef tuple e, sh
    cdef Py_ssize_t n, k
    if not coeff:
        return dst
    if shift is None:
        for e, c in src.items():
            cc = dst.get(e)
            if cc is None:
                dst[e] = coeff * c
            else:
                cc = cc + coeff * c
                if cc:
                    dst[e] = cc
                else:
                    del dst[e]
    else:
        sh = <tuple> shift
        n = len(sh)
        for e, c in src.items():
            e = tuple([e[k] + sh[k] for k in range(n)])
            cc = dst.get(e)
            if cc is None:
                dst[e] = coeff * c
            else:
                cc = cc + coeff * c
                if cc:
                    dst[e] = cc
                else:
                    del dst[e]
    return dst


def vec_addmul(list dst, list src, coeff):
    """In place on coefficient rows: dst[i] += coeff * src[i]."""
    cdef Py_ssize_t i
    if not coeff:
        return dst
    for i in range(len(src)):
        c = src[i]
        if c:
            dst[i] = dst[i] + coeff * c
    return dst
