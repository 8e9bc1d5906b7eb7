"""Dense complex linear algebra used throughout the package.

Eigen/singular value solvers are delegated to LAPACK through numpy; this
module adds the validation, ordering and clamping conventions on top.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NotPSDError, NumericalFailure, ValidationError

HERMITIAN_TOL = 1e-10
PSD_DUST = 1e-10
SYMMETRIC_TOL = 1e-10
# Singular values closer than this (relative to the largest) share a Takagi block.
TAKAGI_CLUSTER_TOL = 1e-6
TAKAGI_ZERO_TOL = 1e-13


@dataclass(frozen=True)
class EigDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


@dataclass(frozen=True)
class TakagiFactorization:
    u: np.ndarray
    lambdas: np.ndarray

    def residual(self, tau: np.ndarray) -> float:
        return float(np.linalg.norm(self.u @ tau @ self.u.T - np.diag(self.lambdas)))


def as_matrix(m, name="matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be two-dimensional, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} has non-finite entries")
    return a


def _square(m, name):
    a = as_matrix(m, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {a.shape}")
    return a


def hermitian_part(h, tol=HERMITIAN_TOL) -> np.ndarray:
    a = _square(h, "hermitian input")
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.linalg.norm(a - a.conj().T) > tol * scale:
        raise ValidationError("input is not Hermitian")
    return (a + a.conj().T) / 2


def herm_eig(h) -> EigDecomposition:
    """Eigendecomposition with eigenvalues in decreasing order."""
    a = hermitian_part(h)
    w, q = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    return EigDecomposition(w[order], q[:, order])


def psd_sqrt(h) -> np.ndarray:
    dec = herm_eig(h)
    w = dec.eigenvalues
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    if w.size and w[-1] < -PSD_DUST * scale:
        raise NotPSDError(f"matrix has eigenvalue {w[-1]:.3e} < 0")
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (dec.eigenvectors * root) @ dec.eigenvectors.conj().T
    return (s + s.conj().T) / 2


def _takagi_block(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Takagi vectors of a small symmetric block via its real 2m x 2m embedding.

    For t = A + iB the real symmetric [[A, B], [B, -A]] has eigenpairs
    (sigma, [x; y]) with t conj(u) = sigma u for u = x + iy.
    """
    m = t.shape[0]
    a, b = t.real, t.imag
    emb = np.block([[a, b], [b, -a]])
    w, v = np.linalg.eigh((emb + emb.T) / 2)
    top = np.argsort(-w, kind="stable")[:m]
    g = v[:m, top] + 1j * v[m:, top]
    return g, w[top]


def takagi(tau) -> TakagiFactorization:
    """Factor a complex symmetric tau as U tau U^T = diag(lambdas).

    SVD first; singular values are grouped into near-degenerate blocks and
    the symmetric restriction of tau to each block is re-diagonalized.
    """
    t = _square(tau, "tau")
    scale = max(1.0, float(np.linalg.norm(t)))
    if np.linalg.norm(t - t.T) > SYMMETRIC_TOL * scale:
        raise ValidationError("tau is not symmetric")
    t = (t + t.T) / 2
    s = t.shape[0]
    if s == 0:
        return TakagiFactorization(np.zeros((0, 0), complex), np.zeros(0))
    try:
        w, sv, _ = np.linalg.svd(t)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed: {exc}") from exc

    smax = sv[0]
    zero_cut = TAKAGI_ZERO_TOL * scale
    blocks = []
    start = 0
    for i in range(1, s + 1):
        if i == s or sv[i - 1] - sv[i] > TAKAGI_CLUSTER_TOL * smax or (
            sv[i - 1] > zero_cut >= sv[i]
        ):
            blocks.append((start, i))
            start = i

    cols = []
    lambdas = []
    for lo, hi in blocks:
        wb = w[:, lo:hi]
        if sv[lo] <= zero_cut:
            cols.append(wb)
            lambdas.extend([0.0] * (hi - lo))
            continue
        tb = wb.conj().T @ t @ wb.conj()
        q, vals = _takagi_block((tb + tb.T) / 2)
        cols.append(wb @ q)
        lambdas.extend(vals)
    g = np.hstack(cols)
    lam = np.clip(np.asarray(lambdas, dtype=float), 0.0, None)
    order = np.argsort(-lam, kind="stable")
    u = g[:, order].conj().T
    fac = TakagiFactorization(u, lam[order])
    if fac.residual(t) > 1e-9 * scale:
        raise NumericalFailure(f"Takagi residual {fac.residual(t):.3e} too large")
    return fac


def haar_unitary(n: int, rng) -> np.ndarray:
    """Haar-distributed n x n unitary (QR of a Ginibre matrix with phase fix)."""
    if n < 1:
        raise DimensionError("haar_unitary needs n >= 1")
    return haar_unitaries(n, 1, rng)[0]


def haar_unitaries(n: int, count: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    ph = d / np.abs(d)
    return q * ph[:, None, :]


def is_unitary(u, tol=1e-10) -> bool:
    u = np.asarray(u)
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])) <= tol)
