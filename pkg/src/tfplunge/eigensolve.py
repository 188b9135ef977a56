"""Hermitian eigendecomposition with residual certificates and plunge statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import ErfcProfile, erfc_profile


class EigenSolveError(RuntimeError):
    """The eigensolver failed or its result did not meet the residual tolerance."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in non-increasing order, with optional eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    residual: float

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class PlungeStats:
    delta: float
    count: int
    first_index: int | None
    last_index: int | None


def hermitian_eig(A, want_vectors: bool = False, tol: float = 1e-8) -> Spectrum:
    """Full spectrum of a dense Hermitian matrix, sorted descending.

    ``residual`` is ``max_k ||A v_k - lambda_k v_k||_2``; an
    :class:`EigenSolveError` is raised if it exceeds ``tol * ||A||_2``.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = np.abs(A).max() if A.size else 0.0
    if np.abs(A - A.conj().T).max() > 1e-10 * max(scale, np.finfo(float).tiny):
        raise ValueError("matrix is not Hermitian")
    try:
        w, V = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"eigendecomposition did not converge: {exc}") from exc
    # eigh returns ascending values; reverse while keeping equal values in order.
    order = np.argsort(-w, kind="stable")
    w = w[order]
    V = V[:, order]
    residual = float(np.linalg.norm(A @ V - V * w, axis=0).max()) if len(w) else 0.0
    norm2 = float(np.abs(w).max()) if len(w) else 0.0
    if residual > tol * max(norm2, 1.0):
        raise EigenSolveError(
            f"residual {residual:.3g} exceeds tolerance {tol:g} * ||A|| = {tol * norm2:.3g}"
        )
    return Spectrum(w, V if want_vectors else None, residual)


def plunge_stats(s: Spectrum | np.ndarray, delta: float = 0.1) -> PlungeStats:
    """Count eigenvalues strictly between ``delta`` and ``1 - delta``."""
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    lam = s.eigenvalues if isinstance(s, Spectrum) else np.asarray(s, dtype=float)
    idx = np.flatnonzero((lam > delta) & (lam < 1 - delta))
    if idx.size == 0:
        return PlungeStats(delta, 0, None, None)
    return PlungeStats(delta, int(idx.size), int(idx[0]), int(idx[-1]))


def linf_profile_error(s: Spectrum | np.ndarray, profile: ErfcProfile) -> float:
    """``max_k |lambda_k - profile(k)|`` with the largest eigenvalue at k = 1."""
    lam = s.eigenvalues if isinstance(s, Spectrum) else np.asarray(s, dtype=float)
    k = np.arange(1, len(lam) + 1)
    return float(np.max(np.abs(lam - erfc_profile(profile, k))))


def eigenvectors_near(s: Spectrum, target: float, count: int) -> list[tuple[float, np.ndarray]]:
    """The ``count`` eigenpairs whose eigenvalues are closest to ``target``."""
    if s.eigenvectors is None:
        raise ValueError("spectrum was computed without eigenvectors")
    if not 0 <= count <= len(s):
        raise ValueError(f"count must lie in [0, {len(s)}], got {count}")
    order = np.argsort(np.abs(s.eigenvalues - target), kind="stable")[:count]
    return [(float(s.eigenvalues[i]), s.eigenvectors[:, i]) for i in order]
