# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled assembly of Gabor frame multiplier matrices."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def assemble_multiplier(const double complex[::1] h,
                        const double complex[:, ::1] kernel,
                        Py_ssize_t a):
    """Dense multiplier matrix; see ``tfplunge._fallback.assemble_multiplier``.

    ``kernel`` has shape (N, M): row n is the frequency kernel of symbol
    column n.
    """
    cdef Py_ssize_t L = h.shape[0]
    cdef Py_ssize_t N = kernel.shape[0]
    cdef Py_ssize_t M = kernel.shape[1]
    cdef Py_ssize_t n, l, lp, d, shift, src
    cdef double complex hl
    cdef double complex[::1] hs = np.empty(L, dtype=np.complex128)
    cdef double complex[::1] hc = np.empty(L, dtype=np.complex128)
    cdef const double complex[::1] kn
    out = np.zeros((L, L), dtype=np.complex128)
    cdef double complex[:, ::1] A = out

    for n in range(N):
        kn = kernel[n]
        for d in range(M):
            if kn[d] != 0:
                break
        else:
            continue
        shift = (n * a) % L
        for l in range(L):
            src = l - shift
            if src < 0:
                src += L
            hs[l] = h[src]
            hc[l] = h[src].conjugate()
        for l in range(L):
            hl = hs[l]
            if hl == 0:
                continue
            d = l % M
            for lp in range(l + 1):
                A[l, lp] += hl * hc[lp] * kn[d]
                d -= 1
                if d < 0:
                    d = M - 1

    for l in range(L):
        A[l, l] = A[l, l].real
        for lp in range(l):
            A[lp, l] = A[l, lp].conjugate()
    return out
