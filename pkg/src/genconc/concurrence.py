"""Pure states whose reduced density has two eigenvalue levels.

Generalized determinant D = l1^n l2^m, the entanglement it controls, the
generalized concurrence d = 2n sqrt(l1 l2) for n = m, and E(d).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, NotTwoLevelError, UnsupportedStructureError
from .linalg import herm_eig
from .states import PureState, reduced_density

CLUSTER_TOL = 1e-8


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log2(np.where(x > 0, x, 1.0)), 0.0)


@dataclass(frozen=True)
class TwoLevelSpectrum:
    lambda1: float
    mult1: int
    lambda2: float
    mult2: int

    @classmethod
    def ordered(cls, la, n, lb, m) -> "TwoLevelSpectrum":
        """Build from two levels given in either order."""
        if la >= lb:
            return cls(float(la), int(n), float(lb), int(m))
        return cls(float(lb), int(m), float(la), int(n))

    def trace(self) -> float:
        return self.mult1 * self.lambda1 + self.mult2 * self.lambda2


def cluster_eigenvalues(w, tol):
    """Group decreasing eigenvalues into (mean, count) clusters."""
    clusters = []
    for x in w:
        if clusters and abs(clusters[-1][-1] - x) <= tol:
            clusters[-1].append(x)
        else:
            clusters.append([x])
    return [(float(np.mean(c)), len(c)) for c in clusters]


def spectrum_structure(psi: PureState, cluster_tol: float = CLUSTER_TOL) -> TwoLevelSpectrum:
    w = herm_eig(reduced_density(psi)).eigenvalues
    tol = cluster_tol * max(w[0], np.finfo(float).tiny)
    nonzero = [(v, c) for v, c in cluster_eigenvalues(w, tol) if abs(v) >= tol]
    zeros = len(w) - sum(c for _, c in nonzero)
    if len(nonzero) > 2:
        raise NotTwoLevelError(
            f"reduced density has {len(nonzero)} distinct non-zero eigenvalues",
            residual=len(nonzero),
        )
    if len(nonzero) == 2:
        (l1, n), (l2, m) = nonzero
        return TwoLevelSpectrum(l1, n, l2, m)
    l1, mult = nonzero[0]
    if zeros:
        return TwoLevelSpectrum(l1, mult, 0.0, zeros)
    if mult % 2 == 0:
        return TwoLevelSpectrum(l1, mult // 2, l1, mult // 2)
    return TwoLevelSpectrum(l1, mult, 0.0, 0)


def gen_determinant_D(s: TwoLevelSpectrum) -> float:
    return float(s.lambda1**s.mult1 * s.lambda2**s.mult2)


def eof_two_level(s: TwoLevelSpectrum) -> float:
    e = -s.mult1 * _xlog2x(s.lambda1) - s.mult2 * _xlog2x(s.lambda2)
    return float(max(0.0, e))


def gen_concurrence_d(s: TwoLevelSpectrum) -> float:
    if s.mult1 != s.mult2:
        raise UnsupportedStructureError(
            f"d is only defined for equal multiplicities, got n={s.mult1}, m={s.mult2}"
        )
    return float(2 * s.mult1 * np.sqrt(max(s.lambda1 * s.lambda2, 0.0)))


def eof_from_d(d: float, n: int) -> float:
    """E(d) = n(-x log2 x - (1/n - x) log2(1/n - x)), x = (1 + sqrt(1 - d^2)) / 2n."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not -1e-12 <= d <= 1 + 1e-12:
        raise DomainError(f"d = {d!r} outside [0, 1]")
    d = min(max(d, 0.0), 1.0)
    root = np.sqrt(1 - d * d)
    x = (1 + root) / (2 * n)
    y = (1 - root) / (2 * n)
    return float(-n * (_xlog2x(x) + _xlog2x(y)))


def dE_dD(lambda1: float, n: int, m: int) -> float:
    """Closed-form derivative of E with respect to D along n l1 + m l2 = 1."""
    l1 = lambda1
    return float(
        m * l1 ** (1 - n) / (1 - n * l1 - m * l1)
        * ((1 - n * l1) / m) ** (1 - m)
        * np.log2((1 - n * l1) / (m * l1))
    )


def wootters_C(psi: PureState) -> float:
    if psi.n != 2:
        raise DimensionError(f"Wootters concurrence needs N = 2, got N = {psi.n}")
    a = psi.a
    return float(2 * abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]))


def pure_summary(psi: PureState, cluster_tol: float = CLUSTER_TOL) -> dict:
    s = spectrum_structure(psi, cluster_tol)
    d = gen_concurrence_d(s) if s.mult1 == s.mult2 else None
    return {
        "d": d,
        "D": gen_determinant_D(s),
        "E": eof_two_level(s),
        "spectrum": {
            "lambda1": s.lambda1,
            "mult1": s.mult1,
            "lambda2": s.lambda2,
            "mult2": s.mult2,
        },
    }
