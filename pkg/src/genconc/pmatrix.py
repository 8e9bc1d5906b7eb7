"""Symmetric matrices p with <<psi|psi>> = <psi|p psi*> = N [A] on a family.

The canonical p is derived from the family's quadratic form; the 16 x 16
matrix listed in the literature for the sym family is kept verbatim for
comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dcomputable import Family, family
from .errors import DimensionError


@dataclass(frozen=True)
class BiformMatrix:
    dim: int
    p: np.ndarray
    family: str
    k: int = 1

    @property
    def family_info(self) -> Family:
        kind = "sym" if self.family.startswith("sym") else self.family
        return family(kind, self.k)

    def triplets(self):
        """Non-zero entries as 1-indexed (row, col, value)."""
        rows, cols = np.nonzero(self.p)
        return [(int(r) + 1, int(c) + 1, float(self.p[r, c].real)) for r, c in zip(rows, cols)]


# 1-indexed (row, col, value) as listed; symmetric partners included in the list.
P16_ENTRIES = (
    (1, 16, 1), (2, 15, 1), (3, 14, -1), (4, 10, 1), (5, 12, 1), (6, 11, 1),
    (7, 13, 1), (8, 8, -1), (9, 9, -1), (10, 4, 1), (11, 6, 1), (12, 5, 1),
    (13, 7, 1), (14, 3, -1), (15, 2, 1), (16, 1, 1),
)


def p16_explicit() -> BiformMatrix:
    p = np.zeros((16, 16))
    for r, c, v in P16_ENTRIES:
        p[r - 1, c - 1] = v
    return BiformMatrix(16, p, "sym-explicit", 1)


def _coordinate_map(fam: Family):
    """For each parameter: its vector positions and the sign it carries there."""
    b = fam.basis()
    out = []
    for j in range(b.shape[1]):
        pos = np.flatnonzero(b[:, j])
        out.append((pos, b[pos, j].real.astype(int)))
    return out


def _param_quadratic_form(fam: Family) -> np.ndarray:
    """Symmetric Q with q(theta) = theta^T Q theta, by polarization."""
    npar = fam.n_params
    eye = np.eye(npar, dtype=complex)
    diag = np.array([fam.concurrence_form(eye[i]) for i in range(npar)])
    q = np.diag(diag)
    for i in range(npar):
        for j in range(i + 1, npar):
            q[i, j] = q[j, i] = (fam.concurrence_form(eye[i] + eye[j]) - diag[i] - diag[j]) / 2
    return q


def derive_p(k: int, family_kind: str = "recursive") -> BiformMatrix:
    """Sparse symmetric p representing q = N [A] on the family subspace.

    Every monomial coef * x_u x_v of q is spread over pairings of the
    positions of x_u (ascending) with those of x_v (descending), so each
    pairing carries an equal share. Entries off the family support are 0.
    """
    fam = family(family_kind, k)
    q = _param_quadratic_form(fam)
    coords = _coordinate_map(fam)
    dim = fam.n**2
    p = [[Fraction(0)] * dim for _ in range(dim)]
    npar = fam.n_params
    for u in range(npar):
        for v in range(u, npar):
            coef = q[u, v] if u == v else 2 * q[u, v]
            if coef == 0:
                continue
            c = Fraction(complex(coef).real).limit_denominator(1 << 20)
            pu, su = coords[u]
            pv, sv = coords[v]
            if len(pu) != len(pv):
                share = c / (2 * len(pu) * len(pv)) if u != v else c / (len(pu) ** 2)
                for a, sa in zip(pu, su):
                    for b, sb in zip(pv, sv):
                        p[a][b] += share * sa * sb
                        if u != v:
                            p[b][a] += share * sa * sb
                continue
            m = len(pu)
            rev = list(zip(pv, sv))[::-1]
            for (a, sa), (b, sb) in zip(zip(pu, su), rev):
                if u == v:
                    p[a][b] += c * sa * sb / m
                else:
                    val = c * sa * sb / (2 * m)
                    p[a][b] += val
                    p[b][a] += val
    mat = np.array([[float(x) for x in row] for row in p])
    mat = (mat + mat.T) / 2
    return BiformMatrix(dim, mat, family_kind, k)


def biform(psi, p: BiformMatrix, phi=None) -> complex:
    """<<psi|phi>> = sum_ab conj(psi_a) p_ab conj(phi_b); phi defaults to psi."""
    x = np.asarray(getattr(psi, "vector", psi), dtype=complex).reshape(-1)
    y = x if phi is None else np.asarray(getattr(phi, "vector", phi), dtype=complex).reshape(-1)
    if x.size != p.dim or y.size != p.dim:
        raise DimensionError(f"state dimension {x.size} does not match p of dimension {p.dim}")
    return complex(x.conj() @ p.p @ y.conj())


def listed_antidiagonal_p(k: int, s_max: int | None = None):
    """The anti-diagonal p as described in the literature, for diagnostics.

    -1 sits at rows 2^{k+1}-1+s(2^{k+2}-2), 2^{k+1}+s(...), 2^{k+2}-1+s(...),
    2^{k+2}+s(...) (1-indexed) for s = 0..s_max, +1 elsewhere on the
    anti-diagonal. Rows beyond the matrix are returned separately.
    """
    dim = 2 ** (2 * k + 2)
    if s_max is None:
        s_max = 2 ** (k + 1) - 1
    step = 2 ** (k + 2) - 2
    starts = (2 ** (k + 1) - 1, 2 ** (k + 1), 2 ** (k + 2) - 1, 2 ** (k + 2))
    diag = np.ones(dim)
    out_of_range = []
    for s in range(s_max + 1):
        for r0 in starts:
            r = r0 + s * step
            if r > dim:
                out_of_range.append(r)
            else:
                diag[r - 1] = -1
    p = np.fliplr(np.diag(diag))
    # The row list is not symmetric on its own; report asymmetry rather than fix it.
    return p, out_of_range


def compare_on_support(p_a: np.ndarray, p_b: np.ndarray, fam: Family, tol=1e-12):
    """Entries (1-indexed) where two p matrices differ on the family support."""
    support = np.flatnonzero(np.any(fam.basis() != 0, axis=1))
    diff = []
    for i in support:
        for j in support:
            if abs(p_a[i, j] - p_b[i, j]) > tol:
                diff.append((int(i) + 1, int(j) + 1, float(p_a[i, j]), float(p_b[i, j])))
    return diff


def p_diagnostics(k: int) -> dict:
    """Compare the literature's anti-diagonal description against the derived p."""
    fam = family("recursive", k)
    derived = derive_p(k, "recursive")
    report = {}
    for label, s_max in (("as_stated", None), ("s_upto_2^k-1", 2**k - 1)):
        pp, oor = listed_antidiagonal_p(k, s_max)
        mism = compare_on_support(pp, derived.p, fam)
        report[label] = {
            "out_of_range_rows": oor,
            "symmetric": bool(np.array_equal(pp, pp.T)),
            "mismatches_on_support": len(mism),
            "first_mismatches": mism[:8],
        }
    return report
