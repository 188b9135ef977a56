"""Closed-form plunge profiles for rotationally invariant symbols.

With the standard Gaussian window and a disk of radius ``R`` as symbol, the
localization operator is diagonal in the Hermite basis and its eigenvalues
are Poisson tail probabilities with mean ``pi R^2``.  Annuli and finite unions
of annuli share the eigenbasis, so their (unordered) eigenvalues are sums and
differences of disk eigenvalues; sorting them gives the spectrum.

All eigenvalue indices ``k`` in this module are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special

SQRT_2PI = math.sqrt(2.0 * math.pi)
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# Poisson mass further than this many standard deviations from the mean is
# below exp(-800) and is dropped.
_TAIL_SIGMAS = 40.0


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskSpec:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"disk radius must be positive, got {self.radius}")

    @property
    def profile(self) -> "ErfcProfile":
        return ErfcProfile(math.pi * self.radius**2, 2.0 * math.pi * self.radius)


@dataclass(frozen=True)
class AnnulusSpec:
    """Annulus with outer radius ``radius`` and inner radius ``ratio * radius``."""

    radius: float
    ratio: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"annulus radius must be positive, got {self.radius}")
        if not 0.0 <= self.ratio < 1.0:
            raise ValueError(f"inner ratio must lie in [0, 1), got {self.ratio}")

    @property
    def inner(self) -> float:
        return self.ratio * self.radius

    @property
    def profile(self) -> "ErfcProfile":
        R, r = self.radius, self.ratio
        return ErfcProfile(math.pi * R**2 * (1 - r**2), 2.0 * math.pi * R * (1 + r))


@dataclass(frozen=True)
class RadialSet:
    """Finite union of disjoint concentric annuli ``[(inner, outer), ...]``.

    Radii must interleave strictly: ``0 <= i1 < o1 < i2 < o2 < ...``.
    """

    annuli: tuple[tuple[float, float], ...]

    def __init__(self, annuli: Sequence[tuple[float, float]]):
        pairs = tuple((float(ri), float(ro)) for ri, ro in annuli)
        if not pairs:
            raise ValueError("RadialSet needs at least one annulus")
        flat = [r for pair in pairs for r in pair]
        if flat[0] < 0 or any(b <= a for a, b in zip(flat, flat[1:])):
            raise ValueError(f"radii must interleave strictly, got {pairs}")
        object.__setattr__(self, "annuli", pairs)

    def scaled(self, factor: float) -> "RadialSet":
        return RadialSet([(factor * ri, factor * ro) for ri, ro in self.annuli])

    @property
    def profile(self) -> "ErfcProfile":
        area = sum(math.pi * (ro**2 - ri**2) for ri, ro in self.annuli)
        boundary = sum(2.0 * math.pi * (ro + ri) for ri, ro in self.annuli)
        return ErfcProfile(area, boundary)


@dataclass(frozen=True)
class ErfcProfile:
    """The map ``k -> erfc(sqrt(2 pi) (k - area) / boundary) / 2``."""

    area: float
    boundary: float

    def __post_init__(self):
        if not self.area >= 0:
            raise ValueError(f"profile area must be nonnegative, got {self.area}")
        if not self.boundary > 0:
            raise ValueError(f"profile boundary must be positive, got {self.boundary}")

    def __call__(self, k):
        return erfc_profile(self, k)


@dataclass(frozen=True)
class TwoErfcParams:
    """Constants of ``f(x) = erfc((x-a)/A) - erfc((x-b)/B)`` with a > b, A > B."""

    a: float
    b: float
    A: float
    B: float

    def __post_init__(self):
        if not (self.a > self.b > 0 and self.A > self.B > 0):
            raise ValueError(f"need a > b > 0 and A > B > 0, got {self}")

    @classmethod
    def from_annulus(cls, spec: AnnulusSpec) -> "TwoErfcParams":
        R, r = spec.radius, spec.inner
        return cls(math.pi * R**2, math.pi * r**2, SQRT_2PI * R, SQRT_2PI * r)

    def f(self, x):
        """The unordered two-erfc function itself."""
        x = np.asarray(x, dtype=float)
        return special.erfc((x - self.a) / self.A) - special.erfc((x - self.b) / self.B)

    @property
    def bound(self) -> float:
        """Distance allowed between the rearrangement and its single-erfc term."""
        return (self.A + self.B) / (self.a - self.b)


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def erfc(x):
    """Complementary error function, elementwise."""
    out = special.erfc(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def erfc_inv(y):
    """Inverse of :func:`erfc` on the open interval (0, 2)."""
    y = np.asarray(y, dtype=float)
    if np.any(~((y > 0) & (y < 2))):
        raise ValueError("erfc_inv is defined only on the open interval (0, 2)")
    out = special.erfcinv(y)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Poisson tails
# ---------------------------------------------------------------------------

_STIRLERR_SMALL = np.array(
    [
        math.lgamma(n + 1) - (n + 0.5) * math.log(n) + n - _LN_SQRT_2PI if n else 0.0
        for n in range(16)
    ]
)


def _stirlerr(n: np.ndarray) -> np.ndarray:
    """log(n!) minus its Stirling approximation, for integer n >= 1."""
    out = np.empty_like(n, dtype=float)
    small = n <= 15
    out[small] = _STIRLERR_SMALL[n[small].astype(int)]
    nn = n[~small].astype(float)
    n2 = nn * nn
    out[~small] = (
        1 / 12 - (1 / 360 - (1 / 1260 - (1 / 1680 - 1 / (1188 * n2)) / n2) / n2) / n2
    ) / nn
    return out


def _bd0(x: np.ndarray, mu: float) -> np.ndarray:
    """Deviance term ``x log(x/mu) + mu - x`` without cancellation."""
    out = np.empty_like(x, dtype=float)
    near = np.abs(x - mu) < 0.1 * (x + mu)
    xn = x[near]
    v = (xn - mu) / (xn + mu)
    s = (xn - mu) * v
    ej = 2 * xn * v
    v2 = v * v
    for j in range(1, 16):
        ej = ej * v2
        s = s + ej / (2 * j + 1)
    out[near] = s
    xf = x[~near]
    out[~near] = xf * np.log(xf / mu) + mu - xf
    return out


def poisson_pmf(j, mu: float) -> np.ndarray:
    """Poisson probabilities ``exp(-mu) mu^j / j!`` via the saddle-point form.

    Accurate to a few ulps in relative terms even when ``mu`` and ``j`` are in
    the millions, where the naive product overflows.
    """
    j = np.atleast_1d(np.asarray(j, dtype=np.int64))
    out = np.empty(j.shape, dtype=float)
    zero = j == 0
    out[zero] = math.exp(-mu)
    jp = j[~zero]
    jf = jp.astype(float)
    out[~zero] = np.exp(-_stirlerr(jp) - _bd0(jf, mu)) / np.sqrt(2 * math.pi * jf)
    return out


def _tail_window(mu: float) -> tuple[int, int]:
    spread = _TAIL_SIGMAS * math.sqrt(mu) + 60.0
    return max(0, int(math.floor(mu - spread))), int(math.ceil(mu + spread))


def disk_eigenvalues(radius: float, kmax: int) -> np.ndarray:
    """Eigenvalues ``lambda_0 .. lambda_kmax`` for the disk of the given radius.

    ``lambda_k = 1 - exp(-mu) sum_{j<=k} mu^j/j!`` with ``mu = pi R^2``, i.e. the
    Poisson upper tail ``P(X > k)``.  Each value is summed from whichever tail
    is smaller, so the absolute error stays near machine precision.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    if radius == 0:
        return np.zeros(kmax + 1)
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    mu = math.pi * radius * radius
    lo, hi = _tail_window(mu)
    hi = max(hi, kmax + 1)
    j = np.arange(lo, hi + 1)
    pmf = poisson_pmf(j, mu)
    lower = np.cumsum(pmf)  # P(lo <= X <= j)
    upper = np.cumsum(pmf[::-1])[::-1]  # P(j <= X <= hi)

    k = np.arange(kmax + 1)
    out = np.ones(kmax + 1)
    idx = k - lo
    inside = idx >= 0
    ki = idx[inside]
    # P(X > k) from the upper sum past the mean, else 1 - P(X <= k).
    up = np.zeros(ki.shape)
    has_next = ki + 1 < len(pmf)
    up[has_next] = upper[ki[has_next] + 1]
    low = 1.0 - lower[ki]
    out[inside] = np.where(k[inside] >= mu, up, low)
    return np.clip(out, 0.0, 1.0)


def disk_eigenvalue(k: int, radius: float) -> float:
    """Eigenvalue ``lambda_k`` (0-based) of the localization operator on ``B(0, R)``."""
    k = int(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if radius == 0:
        return 0.0
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    mu = math.pi * radius * radius
    lo, hi = _tail_window(mu)
    if k < lo:
        return 1.0
    if k >= hi:
        return 0.0
    if k >= mu:
        return float(min(1.0, poisson_pmf(np.arange(k + 1, hi + 1), mu).sum()))
    return float(max(0.0, 1.0 - poisson_pmf(np.arange(lo, k + 1), mu).sum()))


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


def erfc_profile(profile: ErfcProfile, k):
    """Universal erfc plunge profile evaluated at (real) index ``k``."""
    k = np.asarray(k, dtype=float)
    out = 0.5 * special.erfc(SQRT_2PI * (k - profile.area) / profile.boundary)
    return float(out) if out.ndim == 0 else out


def disk_profile(k, radius: float):
    """``erfc((k - pi R^2) / (sqrt(2 pi) R)) / 2``."""
    k = np.asarray(k, dtype=float)
    out = 0.5 * special.erfc((k - math.pi * radius**2) / (SQRT_2PI * radius))
    return float(out) if out.ndim == 0 else out


def counting_function(profile: ErfcProfile, lam):
    """Index at which the profile crosses ``lam``; inverse of :func:`erfc_profile`."""
    lam = np.asarray(lam, dtype=float)
    if np.any(~((lam > 0) & (lam < 1))):
        raise ValueError("counting_function needs 0 < lambda < 1")
    out = profile.area + profile.boundary * special.erfcinv(2 * lam) / SQRT_2PI
    return float(out) if out.ndim == 0 else out


def disk_profile_error(radius: float, kmax: int | None = None) -> float:
    """``max_k |lambda_k - disk_profile(k)|`` over ``k in [0, kmax]``.

    ``kmax`` defaults to ``3 pi R^2`` (at least 50), well past the plunge.
    """
    if kmax is None:
        kmax = max(50, int(math.ceil(3 * math.pi * radius**2)))
    k = np.arange(kmax + 1)
    return float(np.max(np.abs(disk_eigenvalues(radius, kmax) - disk_profile(k, radius))))


# ---------------------------------------------------------------------------
# Annuli and rearrangements
# ---------------------------------------------------------------------------


def annulus_unordered(k, spec: AnnulusSpec):
    """Eigenvalue attached to the k-th Hermite function for the annulus symbol."""
    if np.ndim(k) == 0:
        return disk_eigenvalue(k, spec.radius) - disk_eigenvalue(k, spec.inner)
    k = np.asarray(k, dtype=np.int64)
    kmax = int(k.max())
    outer = disk_eigenvalues(spec.radius, kmax)
    inner = disk_eigenvalues(spec.inner, kmax)
    return (outer - inner)[k]


def radial_unordered(k, radial: RadialSet):
    """Unordered eigenvalues for a union of annuli (sum over components)."""
    if np.ndim(k) == 0:
        return sum(
            disk_eigenvalue(k, ro) - disk_eigenvalue(k, ri) for ri, ro in radial.annuli
        )
    k = np.asarray(k, dtype=np.int64)
    kmax = int(k.max())
    total = np.zeros(kmax + 1)
    for ri, ro in radial.annuli:
        total += disk_eigenvalues(ro, kmax) - disk_eigenvalues(ri, kmax)
    return total[k]


def radial_scan_length(radial: RadialSet) -> int:
    """Number of indices that carries all non-negligible unordered eigenvalues."""
    ro = radial.annuli[-1][1]
    mu = math.pi * ro * ro
    return int(math.ceil(mu + _TAIL_SIGMAS * math.sqrt(mu) + 60))


def decreasing_rearrangement(samples) -> np.ndarray:
    """Sort into non-increasing order; equal values keep their original order."""
    x = np.asarray(samples, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")
    return x[np.argsort(-x, kind="stable")]


def two_erfc_rearranged(params: TwoErfcParams, x):
    """Exact decreasing rearrangement of the symmetrized two-erfc function.

    The result differs from ``erfc((x - (a-b)) / (A+B))`` by at most
    ``params.bound``.
    """
    x = np.asarray(x, dtype=float)
    gap = params.a - params.b
    t = (x - gap) / (params.A + params.B)
    out = special.erfc(t) - special.erfc((params.A * t + gap) / params.B)
    return float(out) if out.ndim == 0 else out


def sorted_profile_error(values: np.ndarray, profile: ErfcProfile, offset: int = 0) -> float:
    """Sup distance between a decreasing rearrangement and a profile.

    ``values[i]`` is compared with the profile at index ``i + offset``.
    """
    s = decreasing_rearrangement(values)
    k = np.arange(len(s)) + offset
    return float(np.max(np.abs(s - erfc_profile(profile, k))))
