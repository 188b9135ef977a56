"""Pure numpy versions of the compiled kernels."""

import numpy as np


def assemble_multiplier(h: np.ndarray, kernel: np.ndarray, a: int) -> np.ndarray:
    """Dense matrix of ``sum_{m,n} s[m,n] g_{m,n} g_{m,n}^*``.

    With ``g_{m,n}[l] = exp(2 pi i m l / M) h[l - n a]`` the modulation sum
    collapses to a kernel in ``(l - l') mod M``::

        A[l, l'] = sum_n h[l - n a] conj(h[l' - n a]) kernel[n, (l - l') mod M]

    where ``kernel[n, d] = sum_m s[m, n] exp(2 pi i m d / M)``.
    """
    h = np.asarray(h, dtype=np.complex128)
    L = h.shape[0]
    N, M = kernel.shape
    idx = np.arange(L)
    diff = (idx[:, None] - idx[None, :]) % M
    A = np.zeros((L, L), dtype=np.complex128)
    for n in range(N):
        kn = kernel[n]
        if not np.any(kn):
            continue
        hn = np.roll(h, n * a)
        A += np.outer(hn, hn.conj()) * kn[diff]
    A = 0.5 * (A + A.conj().T)
    return A
