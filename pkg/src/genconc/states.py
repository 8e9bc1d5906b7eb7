"""Bipartite pure states, density matrices and ensembles on C^N (x) C^N.

A pure state sum_ij a_ij e_i (x) e_j is stored through its N x N amplitude
matrix; the state vector uses row-major order, alpha = i*N + j (0-based).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, DimensionError, ValidationError
from .linalg import as_matrix, herm_eig, hermitian_part

NORM_TOL = 1e-10
WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class PureState:
    n: int
    a: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return self.a.reshape(-1)

    @classmethod
    def from_vector(cls, psi, normalize=False) -> "PureState":
        psi = np.asarray(psi, dtype=complex).reshape(-1)
        n = int(round(np.sqrt(psi.size)))
        if n * n != psi.size:
            raise DimensionError(f"vector length {psi.size} is not a square")
        return make_pure(psi.reshape(n, n), normalize=normalize)


@dataclass(frozen=True)
class DensityMatrix:
    dim: int
    m: np.ndarray

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix":
        h = hermitian_part(m)
        tr = np.trace(h).real
        if abs(tr - 1) > NORM_TOL:
            raise ValidationError(f"density matrix trace {tr!r} != 1")
        w = np.linalg.eigvalsh(h)
        if w[0] < -1e-10:
            raise ValidationError(f"density matrix has negative eigenvalue {w[0]:.3e}")
        return cls(h.shape[0], h)

    @property
    def local_dim(self) -> int:
        n = int(round(np.sqrt(self.dim)))
        if n * n != self.dim:
            raise DimensionError(f"dimension {self.dim} is not N^2")
        return n


@dataclass(frozen=True)
class Ensemble:
    """Subnormalized state vectors (rows); squared norms are the weights."""

    states: np.ndarray

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.states, dtype=complex))
        if not np.all(np.isfinite(s)):
            raise ValidationError("ensemble has non-finite entries")
        object.__setattr__(self, "states", s)

    def __len__(self):
        return self.states.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return np.sum(np.abs(self.states) ** 2, axis=1)

    def normalized_states(self) -> list[PureState]:
        out = []
        for w, v in zip(self.weights, self.states):
            if w > 0:
                out.append(PureState.from_vector(v / np.sqrt(w)))
        return out

    @classmethod
    def from_weighted(cls, weights, states) -> "Ensemble":
        weights = np.asarray(weights, dtype=float)
        if np.any(weights < 0):
            raise ValidationError("negative ensemble weight")
        vecs = [np.asarray(getattr(s, "vector", s), dtype=complex).reshape(-1) for s in states]
        vecs = [v / np.linalg.norm(v) for v in vecs]
        return cls(np.array([np.sqrt(p) * v for p, v in zip(weights, vecs)]))


def make_pure(a, normalize=False) -> PureState:
    a = as_matrix(a, "amplitude matrix")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"amplitude matrix must be square, got {a.shape}")
    norm2 = float(np.sum(np.abs(a) ** 2))
    if normalize:
        if norm2 == 0.0:
            raise DegenerateInputError("cannot normalize the zero state")
        a = a / np.sqrt(norm2)
    elif abs(norm2 - 1) > NORM_TOL:
        raise ValidationError(f"state is not normalized (sum |a_ij|^2 = {norm2!r})")
    return PureState(a.shape[0], a)


def reduced_density(psi: PureState) -> np.ndarray:
    a = psi.a
    return a @ a.conj().T


def entropy(rho1) -> float:
    """Von Neumann entropy in bits; 0 log 0 is taken as 0."""
    w = herm_eig(rho1).eigenvalues
    if abs(w.sum() - 1) > 1e-8:
        raise ValidationError(f"trace {w.sum()!r} != 1")
    if w[-1] < -1e-10 or w[0] > 1 + 1e-10:
        raise ValidationError("spectrum outside [0, 1]")
    w = w[w > 0]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def eof_pure(psi: PureState) -> float:
    return entropy(reduced_density(psi))


def ensemble_density(e: Ensemble) -> DensityMatrix:
    total = e.weights.sum()
    if abs(total - 1) > WEIGHT_TOL:
        raise ValidationError(f"ensemble weights sum to {total!r}, not 1")
    s = e.states
    m = s.T @ s.conj()
    return DensityMatrix(m.shape[0], (m + m.conj().T) / 2)


def transform_ensemble(e: Ensemble, v) -> Ensemble:
    """z_i = sum_j conj(V_ij) y_j for V (t x s) with orthonormal columns."""
    v = as_matrix(v, "isometry")
    if v.shape[1] != len(e):
        raise DimensionError(f"isometry has {v.shape[1]} columns for {len(e)} states")
    if np.linalg.norm(v.conj().T @ v - np.eye(v.shape[1])) > 1e-10:
        raise ValidationError("isometry columns are not orthonormal")
    return Ensemble(v.conj() @ e.states)


def projector(psi) -> DensityMatrix:
    v = np.asarray(getattr(psi, "vector", psi), dtype=complex).reshape(-1)
    return ensemble_density(Ensemble(v[None, :]))
