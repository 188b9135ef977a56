"""Finite discrete Gabor systems and frame multipliers.

Signals have length ``L = a * M``.  The lattice has ``N = L / a`` time shifts
(hop ``a``) and ``M`` frequency channels, and the atom at grid point
``(m, n)`` is ``g_{m,n}[l] = exp(2 pi i m l / M) g[l - n a]``.  Coefficient and
symbol grids are stored as ``(M, N)`` arrays: rows are frequency channels,
columns are time shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .kernels import assemble_multiplier


class FrameError(ArithmeticError):
    """The Gabor system is not a frame (or is numerically too close to failing)."""


@dataclass(frozen=True)
class LatticeParams:
    a: int
    M: int

    def __post_init__(self):
        if self.a < 1 or self.M < 1:
            raise ValueError(f"lattice needs positive a and M, got a={self.a}, M={self.M}")
        if self.a >= self.M:
            raise ValueError(f"need redundancy M/a > 1, got a={self.a}, M={self.M}")

    @property
    def L(self) -> int:
        return self.a * self.M

    @property
    def N(self) -> int:
        return self.L // self.a

    @property
    def shape(self) -> tuple[int, int]:
        """Shape of coefficient and symbol grids, ``(M, N)``."""
        return (self.M, self.N)

    @property
    def cell_area(self) -> float:
        """Time-frequency area of one lattice cell, ``a / M``."""
        return self.a / self.M


@dataclass(frozen=True, eq=False)
class Window:
    values: np.ndarray
    kind: Literal["gauss", "box", "custom", "tight"] = "custom"
    width: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def L(self) -> int:
        return self.values.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True, eq=False)
class FrameMultiplier:
    matrix: np.ndarray
    lattice: LatticeParams
    symbol: np.ndarray
    window: Window
    normalized: bool = field(default=True)

    @property
    def L(self) -> int:
        return self.lattice.L


def _centered_indices(L: int) -> np.ndarray:
    """Circular index ``l`` mapped to its signed representative in [-L/2, L/2)."""
    l = np.arange(L)
    return np.where(l < (L + 1) // 2, l, l - L)


def periodized_gaussian(L: int) -> Window:
    """Unit-norm periodization of ``exp(-pi t^2 / L)``; invariant under the unitary DFT."""
    if L < 4:
        raise ValueError(f"periodized Gaussian needs L >= 4, got {L}")
    t = _centered_indices(L).astype(float)
    reach = math.ceil(math.sqrt(36.0 * L / math.pi) / L) + 1
    g = np.zeros(L)
    for j in range(-reach, reach + 1):
        g += np.exp(-math.pi * (t + j * L) ** 2 / L)
    return Window(g / np.linalg.norm(g), kind="gauss")


def default_box_width(L: int) -> int:
    """Even integer closest to sqrt(L), the time width of the periodized Gaussian."""
    return max(2, 2 * round(math.sqrt(L) / 2))


def box_window(L: int, width: int | None = None) -> Window:
    """Unit-norm indicator of ``width`` circular samples centered at index 0."""
    if width is None:
        width = default_box_width(L)
    if not 1 <= width <= L:
        raise ValueError(f"box width must lie in [1, L={L}], got {width}")
    g = np.zeros(L)
    start = -(width // 2)
    g[np.arange(start, start + width) % L] = 1.0 / math.sqrt(width)
    return Window(g, kind="box", width=width)


def _check_window(w: Window, lattice: LatticeParams) -> None:
    if w.L != lattice.L:
        raise ValueError(f"window length {w.L} does not match lattice L={lattice.L}")


def gabor_atom(w: Window, lattice: LatticeParams, n: int, m: int) -> np.ndarray:
    """Time-frequency shifted window ``exp(2 pi i m l / M) w[l - n a]``."""
    _check_window(w, lattice)
    if not (0 <= n < lattice.N and 0 <= m < lattice.M):
        raise IndexError(f"atom index (n={n}, m={m}) outside the {lattice.N}x{lattice.M} lattice")
    l = np.arange(lattice.L)
    return np.exp(2j * np.pi * m * l / lattice.M) * np.roll(w.values, n * lattice.a)


def dgt(f, w: Window, lattice: LatticeParams) -> np.ndarray:
    """Coefficients ``c[m, n] = <f, g_{m,n}>`` as an ``(M, N)`` array."""
    _check_window(w, lattice)
    f = np.asarray(f, dtype=np.complex128)
    if f.shape != (lattice.L,):
        raise ValueError(f"signal must have shape ({lattice.L},), got {f.shape}")
    a, M, N, L = lattice.a, lattice.M, lattice.N, lattice.L
    # Row n holds f[l] * conj(w[l - n a]).
    shifts = (np.arange(L)[None, :] - a * np.arange(N)[:, None]) % L
    prod = f[None, :] * w.values.conj()[shifts]
    # Fold modulo M so a length-M FFT yields the M channels.
    folded = prod.reshape(N, L // M, M).sum(axis=1)
    return np.fft.fft(folded, axis=1).T


def idgt(c, w: Window, lattice: LatticeParams) -> np.ndarray:
    """Synthesis ``sum_{m,n} c[m, n] g_{m,n}``; the adjoint of :func:`dgt`."""
    _check_window(w, lattice)
    c = np.asarray(c, dtype=np.complex128)
    if c.shape != lattice.shape:
        raise ValueError(f"coefficients must have shape {lattice.shape}, got {c.shape}")
    a, M, N, L = lattice.a, lattice.M, lattice.N, lattice.L
    per_shift = np.fft.ifft(c.T, axis=1) * M  # (N, M), periodic in l with period M
    tiled = np.tile(per_shift, (1, L // M))
    shifts = (np.arange(L)[None, :] - a * np.arange(N)[:, None]) % L
    return (tiled * w.values[shifts]).sum(axis=0)


def symbol_kernel(symbol: np.ndarray) -> np.ndarray:
    """Per-column frequency kernels ``sum_m s[m, n] exp(2 pi i m d / M)``, shape (N, M)."""
    s = np.asarray(symbol, dtype=float)
    M = s.shape[0]
    return np.ascontiguousarray((M * np.fft.ifft(s, axis=0)).T)


def _assemble(symbol: np.ndarray, w: Window, lattice: LatticeParams) -> np.ndarray:
    return assemble_multiplier(
        np.ascontiguousarray(w.values), symbol_kernel(symbol), lattice.a
    )


def frame_operator(w: Window, lattice: LatticeParams) -> np.ndarray:
    """``S = sum_{m,n} g_{m,n} g_{m,n}^*`` as a dense ``L x L`` matrix."""
    _check_window(w, lattice)
    return _assemble(np.ones(lattice.shape), w, lattice)


def _frame_blocks(w: Window, lattice: LatticeParams) -> np.ndarray:
    """The a x a blocks of S on the residue classes ``l = r + q M`` (q = 0..a-1).

    S couples ``l`` and ``l'`` only when ``l = l' (mod M)``, so it is block
    diagonal after grouping indices by ``l mod M``.
    """
    a, M, N, L = lattice.a, lattice.M, lattice.N, lattice.L
    shifts = (np.arange(L)[None, :] - a * np.arange(N)[:, None]) % L
    wn = w.values[shifts]  # wn[n, l] = w[l - n a]
    wn = wn.reshape(N, a, M)  # [n, q, r]
    return M * np.einsum("nqr,npr->rqp", wn, wn.conj())


def tight_window(w: Window, lattice: LatticeParams, *, rcond: float = 1e-10) -> Window:
    """Canonical tight window ``S^{-1/2} w`` of the Gabor system.

    Raises :class:`FrameError` if the frame operator's condition number
    exceeds ``1 / rcond``.
    """
    _check_window(w, lattice)
    a, M = lattice.a, lattice.M
    blocks = _frame_blocks(w, lattice)
    evals, evecs = np.linalg.eigh(blocks)
    top = evals.max()
    if not top > 0 or evals.min() < rcond * top:
        raise FrameError(
            f"window does not generate a frame for a={a}, M={M} "
            f"(eigenvalue ratio {evals.min() / top if top > 0 else 0:.3g})"
        )
    inv_sqrt = np.einsum("rqk,rk,rpk->rqp", evecs, evals**-0.5, evecs.conj())
    v = w.values.reshape(a, M).T  # [r, q]
    h = np.einsum("rqp,rp->rq", inv_sqrt, v).T.reshape(-1)
    return Window(h, kind="tight", width=w.width)


def frame_multiplier(
    symbol, w: Window, lattice: LatticeParams, normalize: bool = True
) -> FrameMultiplier:
    """Assemble ``A = sum_{m,n} symbol[m, n] g_{m,n} g_{m,n}^*``.

    With ``normalize`` the tight window is used for analysis and synthesis,
    so the all-ones symbol gives the identity.
    """
    _check_window(w, lattice)
    s = np.asarray(symbol)
    if s.shape != lattice.shape:
        raise ValueError(f"symbol shape {s.shape} does not match lattice grid {lattice.shape}")
    h = tight_window(w, lattice) if normalize else w
    return FrameMultiplier(
        matrix=_assemble(s, h, lattice),
        lattice=lattice,
        symbol=s,
        window=h,
        normalized=normalize,
    )
