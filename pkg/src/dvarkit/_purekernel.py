"""Pure-Python sparse-polynomial kernels.

Terms are dicts mapping exponent tuples to nonzero Fraction coefficients.
These three loops dominate Groebner reduction and the ansatz searches;
dvarkit._fastkernel holds the compiled twin selected in dvarkit.kernel.
"""

BACKEND = "python"


def poly_mul(a, b):
    """Multiply two term dicts, dropping cancelled terms."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(i + j for i, j in zip(ea, eb))
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


def poly_addmul(dst, src, coeff, shift=None):
    """In place: dst += coeff * x^shift * src.  Returns dst."""
    if not coeff:
        return dst
    for e, c in src.items():
        if shift is not None:
            e = tuple(i + j for i, j in zip(e, shift))
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


def vec_addmul(dst, src, coeff):
    """In place on coefficient rows: dst[i] += coeff * src[i]."""
    if not coeff:
        return dst
    for i, c in enumerate(src):
        if c:
            dst[i] = dst[i] + coeff * c
    return dst
