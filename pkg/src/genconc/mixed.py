"""Entanglement of formation for mixed states supported on a family.

Pipeline: eigenvectors v_i of rho scaled by sqrt(eigenvalue) -> symmetric
tau_ij = <<v_i|v_j>> -> Takagi values Lambda -> d(rho) = L1 - sum_{i>1} Li
-> E(d(rho)).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .concurrence import eof_from_d
from .errors import DimensionError, NotInClassError, NumericalFailure, UnsupportedStructureError
from .linalg import haar_unitaries, herm_eig, psd_sqrt, takagi
from .pmatrix import BiformMatrix
from .states import DensityMatrix, Ensemble

RANK_TOL = 1e-10
CLASS_TOL = 1e-8
METHODS = ("tau-takagi", "rho-p-eig", "R-matrix")


@dataclass(frozen=True)
class LambdaSpectrum:
    lambdas: np.ndarray
    method: str


@dataclass(frozen=True)
class MixedConcurrenceResult:
    raw: float
    clamped: float
    eof: float
    lambdas: np.ndarray
    # True when raw < 0: E(clamped) is then a heuristic, not an established value.
    caveat: bool = False


def _support(rho: DensityMatrix):
    dec = herm_eig(rho.m)
    keep = dec.eigenvalues > RANK_TOL
    return dec.eigenvalues[keep], dec.eigenvectors[:, keep]


def class_residual(rho: DensityMatrix, p: BiformMatrix) -> float:
    """Frobenius norm of the part of rho outside the family subspace."""
    b = p.family_info.basis()
    if b.shape[0] != rho.dim:
        raise DimensionError(f"rho has dimension {rho.dim}, p acts on {b.shape[0]}")
    q, _ = np.linalg.qr(b)
    outside = rho.m - q @ (q.conj().T @ rho.m)
    return float(np.linalg.norm(outside))


def check_in_class(rho: DensityMatrix, p: BiformMatrix, tol=CLASS_TOL):
    r = class_residual(rho, p)
    if r > tol:
        raise NotInClassError(f"rho has support outside the {p.family} family (residual {r:.3e})", r)


def scaled_eigenvectors(rho: DensityMatrix) -> np.ndarray:
    """Columns v_i with <v_i|v_i> equal to the i-th non-zero eigenvalue."""
    mu, q = _support(rho)
    return q * np.sqrt(mu)


def tau_matrix(rho: DensityMatrix, p: BiformMatrix) -> np.ndarray:
    check_in_class(rho, p)
    v = scaled_eigenvectors(rho)
    tau = v.conj().T @ p.p @ v.conj()
    return (tau + tau.T) / 2


def _top(values, s):
    vals = np.sort(np.asarray(values, dtype=float))[::-1][:s]
    return np.clip(vals, 0.0, None)


def lambda_spectrum(rho: DensityMatrix, p: BiformMatrix, method: str = "tau-takagi") -> LambdaSpectrum:
    """Decreasing Lambda values, one per non-zero eigenvalue of rho."""
    if p.dim != rho.dim:
        raise DimensionError(f"rho has dimension {rho.dim}, p has {p.dim}")
    s = len(_support(rho)[0])
    if method == "tau-takagi":
        lam = takagi(tau_matrix(rho, p)).lambdas
    elif method == "rho-p-eig":
        m = rho.m @ p.p @ rho.m.conj() @ p.p
        w = np.linalg.eigvals(m)
        top = w[np.argsort(-np.abs(w), kind="stable")[:s]]
        scale = max(1.0, float(np.abs(w).max(initial=0.0)))
        if np.any(np.abs(top.imag) > 1e-8 * scale):
            raise NumericalFailure("rho p rho* p has eigenvalues with a significant imaginary part")
        lam = np.sqrt(np.clip(top.real, 0.0, None))
    elif method == "R-matrix":
        sq = psd_sqrt(rho.m)
        inner = sq @ p.p @ rho.m.conj() @ p.p @ sq
        lam = herm_eig(psd_sqrt((inner + inner.conj().T) / 2)).eigenvalues
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return LambdaSpectrum(_top(lam, s), method)


def d_from_lambdas(lambdas) -> float:
    lam = np.asarray(lambdas, dtype=float)
    if lam.size == 0:
        return 0.0
    return float(lam[0] - lam[1:].sum())


def mixed_concurrence(rho: DensityMatrix, p: BiformMatrix, k: int | None = None) -> MixedConcurrenceResult:
    if k is None:
        k = p.k
    lam = lambda_spectrum(rho, p, "tau-takagi").lambdas
    raw = d_from_lambdas(lam)
    clamped = min(max(raw, 0.0), 1.0)
    return MixedConcurrenceResult(raw, clamped, eof_from_d(clamped, 2**k), lam, caveat=raw < 0)


def optimal_decomposition(rho: DensityMatrix, p: BiformMatrix) -> Ensemble:
    """States w_i = sum_j conj(U_ij) v_j with <<w_i|w_j>> = Lambda_i delta_ij."""
    tau = tau_matrix(rho, p)
    fac = takagi(tau)
    v = scaled_eigenvectors(rho)
    w = fac.u.conj() @ v.T
    return Ensemble(w)


def biform_gram(e: Ensemble, p: BiformMatrix) -> np.ndarray:
    s = e.states
    return s.conj() @ p.p @ s.conj().T


def _zero_diagonal_rotation(f: np.ndarray, tol: float):
    """Real orthogonal O with diag(O f O^T) = 0 for symmetric traceless f.

    Repeatedly pairs a positive with a negative diagonal entry and rotates
    in their plane so the first becomes exactly zero.
    """
    s = f.shape[0]
    o = np.eye(s)
    f = f.copy()
    for _ in range(4 * s * s):
        diag = np.diag(f)
        if np.abs(diag).max(initial=0.0) <= tol:
            return o, f
        i = int(np.argmax(np.abs(diag)))
        opp = np.flatnonzero(np.sign(diag) == -np.sign(diag[i]))
        if opp.size == 0:
            break
        j = int(opp[np.argmax(np.abs(diag[opp]))])
        fii, fjj, fij = f[i, i], f[j, j], f[i, j]
        # Row i of the rotated matrix: (c, s) -> c^2 fii + 2cs fij + s^2 fjj = 0.
        disc = np.sqrt(max(fij * fij - fii * fjj, 0.0))
        t = (-fij + disc) / fjj if fjj != 0 else -fii / (2 * fij)
        c = 1 / np.sqrt(1 + t * t)
        sn = t * c
        g = np.eye(s)
        g[i, i], g[i, j], g[j, i], g[j, j] = c, sn, -sn, c
        f = g @ f @ g.T
        o = g @ o
    raise NumericalFailure("equalization did not converge")


def equalized_decomposition(rho: DensityMatrix, p: BiformMatrix, tol: float = 1e-6) -> Ensemble:
    """Decomposition where every member has generalized concurrence d(rho)."""
    w = optimal_decomposition(rho, p)
    lam = np.real(np.diag(biform_gram(w, p)))
    d = d_from_lambdas(lam)
    if d < 0:
        raise UnsupportedStructureError(f"d(rho) = {d:.6g} < 0; no equal-concurrence decomposition")
    y = w.states.copy()
    y[1:] *= 1j
    if len(y) == 1:
        return Ensemble(y)
    ygram = np.real(biform_gram(Ensemble(y), p))
    metric = np.real(y.conj() @ y.T)
    f = ygram - d * metric
    f = (f + f.T) / 2
    o, _ = _zero_diagonal_rotation(f, 1e-14 * max(1.0, np.abs(f).max()))
    z = o @ y
    keep = np.sum(np.abs(z) ** 2, axis=1) > 1e-14
    out = Ensemble(z[keep])
    ratios = member_concurrences(out, p)
    if np.abs(ratios - d).max(initial=0.0) > tol:
        raise NumericalFailure("equalized concurrences spread beyond tolerance")
    return out


def member_concurrences(e: Ensemble, p: BiformMatrix) -> np.ndarray:
    """|<<z_i|z_i>>| / <z_i|z_i>: the concurrence of each normalized member."""
    g = np.abs(np.diag(biform_gram(e, p)))
    return g / e.weights


def isometry_averages(lambdas, v: np.ndarray) -> np.ndarray:
    """sum_i |sum_j V_ij^2 Y_jj| with Y = diag(L1, -L2, ...); v is (..., t, s)."""
    lam = np.asarray(lambdas, dtype=float)
    y = np.concatenate([lam[:1], -lam[1:]])
    return np.abs((v**2) @ y).sum(axis=-1)


def _trial_chunk(lambdas, t, count, seed):
    s = len(lambdas)
    u = haar_unitaries(t, count, np.random.default_rng(seed))
    return isometry_averages(lambdas, u[:, :, :s])


def brute_force_trials(rho: DensityMatrix, p: BiformMatrix, trials: int, t: int, rng=0,
                       workers: int = 1, chunk: int = 1000) -> np.ndarray:
    """Average concurrence for `trials` Haar-random t x s isometries.

    Seeds are derived per chunk from the master seed, so the result does
    not depend on the number of workers.
    """
    lam = lambda_spectrum(rho, p, "tau-takagi").lambdas
    s = len(lam)
    if t < s:
        raise DimensionError(f"t = {t} is smaller than rank {s}")
    if isinstance(rng, np.random.Generator):
        rng = int(rng.integers(2**63))
    counts = [min(chunk, trials - i) for i in range(0, trials, chunk)]
    seeds = np.random.SeedSequence(rng).spawn(len(counts))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _trial_chunk(lam, t, *a), zip(counts, seeds)))
    else:
        parts = [_trial_chunk(lam, t, c, sd) for c, sd in zip(counts, seeds)]
    return np.concatenate(parts) if parts else np.zeros(0)


def brute_force_min(rho: DensityMatrix, p: BiformMatrix, trials: int, t: int, rng=0, workers: int = 1) -> float:
    return float(brute_force_trials(rho, p, trials, t, rng, workers).min())


def random_class_density(fam_kind: str, k: int, rank: int, rng):
    """Random mixture of `rank` normalized family states with Dirichlet weights."""
    from .dcomputable import amplitude_matrix, random_params

    rng = np.random.default_rng(rng)
    states = [amplitude_matrix(random_params(fam_kind, k, rng)).reshape(-1) for _ in range(rank)]
    weights = rng.dirichlet(np.ones(rank))
    from .states import ensemble_density

    return ensemble_density(Ensemble.from_weighted(weights, states))
