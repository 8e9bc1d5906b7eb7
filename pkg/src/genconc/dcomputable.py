"""The d-computable state families.

Two constructions are provided and kept distinct:

* ``sym``: the 4 x 4 zero-diagonal family in a1, b1, c1, d1, b, e with
  d = 4|b1 c1 - a1 d1 + b e|.
* ``recursive``: A_2 = [[a, -c], [c, d]] grown by
  A_{2^{l+1}} = [[b_l J, A], [(-1)^{l(l+1)/2} A^T, c_l J^T]], l = 1..k,
  giving N = 2^{k+1} with d = N |[A]|.

In both cases AA^dag has two eigenvalues of multiplicity N/2 and the
generalized concurrence is N |[A]| for the family's quadratic form [A].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .concurrence import CLUSTER_TOL, cluster_eigenvalues
from .errors import (
    DegenerateInputError,
    DimensionError,
    DomainError,
    NotInFamilyError,
    ValidationError,
)
from .states import NORM_TOL, PureState, make_pure

FAMILIES = ("sym", "recursive")

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
J4 = np.array(
    [
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


@dataclass(frozen=True)
class SymFamilyParams:
    a1: complex = 0j
    b1: complex = 0j
    c1: complex = 0j
    d1: complex = 0j
    b: complex = 0j
    e: complex = 0j

    names = ("a1", "b1", "c1", "d1", "b", "e")

    @property
    def k(self) -> int:
        return 1

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in self.names], dtype=complex)

    @classmethod
    def from_vector(cls, v) -> "SymFamilyParams":
        return cls(*(complex(x) for x in v))


@dataclass(frozen=True)
class DComputableParams:
    a: complex = 0j
    c: complex = 0j
    d: complex = 0j
    ladder: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(
            self, "ladder", tuple((complex(b), complex(c)) for b, c in self.ladder)
        )

    @property
    def k(self) -> int:
        return len(self.ladder)

    def as_vector(self) -> np.ndarray:
        flat = [x for pair in self.ladder for x in pair]
        return np.array([self.a, self.c, self.d, *flat], dtype=complex)

    @classmethod
    def from_vector(cls, v, k: int | None = None) -> "DComputableParams":
        v = [complex(x) for x in v]
        if k is not None and len(v) != 3 + 2 * k:
            raise ValidationError(f"expected {3 + 2 * k} parameters for k={k}, got {len(v)}")
        if len(v) < 5 or len(v) % 2 == 0:
            raise ValidationError(f"bad parameter count {len(v)}")
        ladder = tuple(zip(v[3::2], v[4::2]))
        return cls(v[0], v[1], v[2], ladder)


def _level_sign(level: int) -> int:
    return -1 if (level * (level + 1) // 2) % 2 else 1


@lru_cache(maxsize=None)
def _build_J_cached(k: int) -> np.ndarray:
    if k == 1:
        return J2
    if k == 2:
        # Displayed J_4; the block recursion only reproduces it from here on.
        return J4
    prev = _build_J_cached(k - 1)
    z = np.zeros_like(prev)
    return np.block([[z, prev], [_level_sign(k) * prev.T, z]])


def build_J(k: int) -> np.ndarray:
    """Signed anti-diagonal 2^k x 2^k matrix J_{2^k}."""
    if k < 1:
        raise DomainError("build_J needs k >= 1")
    return _build_J_cached(k).copy()


def _recursive_matrix(params: DComputableParams) -> np.ndarray:
    a = np.array([[params.a, -params.c], [params.c, params.d]], dtype=complex)
    for level, (b, c) in enumerate(params.ladder, start=1):
        j = _build_J_cached(level)
        a = np.block([[b * j, a], [_level_sign(level) * a.T, c * j.T]])
    return a


def _sym_matrix(p: SymFamilyParams) -> np.ndarray:
    return np.array(
        [
            [0, p.b, p.a1, p.b1],
            [-p.b, 0, p.c1, p.d1],
            [p.a1, p.c1, 0, -p.e],
            [p.b1, p.d1, p.e, 0],
        ],
        dtype=complex,
    )


def amplitude_matrix(params) -> np.ndarray:
    """Unnormalized amplitude matrix of either family."""
    if isinstance(params, SymFamilyParams):
        return _sym_matrix(params)
    if params.k < 1:
        raise ValidationError("recursive family needs at least one ladder pair (k >= 1)")
    return _recursive_matrix(params)


def bracket_form(params) -> complex:
    """The quadratic form [A] with det(AA^dag) = |[A]|^N."""
    if isinstance(params, SymFamilyParams):
        p = params
        return complex(p.b1 * p.c1 - p.a1 * p.d1 + p.b * p.e)
    if params.k < 1:
        raise ValidationError("recursive family needs k >= 1")
    b1, c1 = params.ladder[0]
    value = b1 * c1 + params.a * params.d + params.c**2
    for level in range(2, params.k + 1):
        b, c = params.ladder[level - 1]
        value = _level_sign(level) * b * c - value
    return complex(value)


def norm_form(params) -> float:
    """||A||: the sum of the two eigenvalues of AA^dag."""
    if isinstance(params, SymFamilyParams):
        return float(np.sum(np.abs(params.as_vector()) ** 2))
    total = abs(params.a) ** 2 + 2 * abs(params.c) ** 2 + abs(params.d) ** 2
    for b, c in params.ladder:
        total += abs(b) ** 2 + abs(c) ** 2
    return float(total)


def local_dim(params) -> int:
    return 2 ** (params.k + 1)


def trace_norm2(params) -> float:
    """tr(AA^dag) = (N/2) ||A||."""
    return local_dim(params) // 2 * norm_form(params)


def normalize_params(params):
    tr = trace_norm2(params)
    if tr == 0.0:
        raise DegenerateInputError("all parameters are zero")
    return type(params).from_vector(params.as_vector() / np.sqrt(tr))


def is_normalized(params, tol=NORM_TOL) -> bool:
    return abs(trace_norm2(params) - 1) <= tol


def _build(params, normalize):
    if not np.any(params.as_vector()):
        raise DegenerateInputError("all parameters are zero")
    if normalize:
        params = normalize_params(params)
    return make_pure(amplitude_matrix(params))


def build_A4_sym(params: SymFamilyParams, normalize: bool = True) -> PureState:
    return _build(params, normalize)


def build_A(params: DComputableParams, normalize: bool = True) -> PureState:
    if params.k < 1:
        raise ValidationError("ladder must contain k >= 1 pairs")
    return _build(params, normalize)


def d_sym_closed(params: SymFamilyParams) -> float:
    return 4 * abs(bracket_form(params))


def d_closed_form(params) -> float:
    if not is_normalized(params):
        raise ValidationError("d_closed_form needs normalized parameters (tr AA^dag = 1)")
    return local_dim(params) * abs(bracket_form(params))


# Linear structure of the families.


@dataclass(frozen=True)
class Family:
    kind: str
    k: int

    @property
    def n(self) -> int:
        return 4 if self.kind == "sym" else 2 ** (self.k + 1)

    @property
    def n_params(self) -> int:
        return 6 if self.kind == "sym" else 3 + 2 * self.k

    def params(self, theta):
        if self.kind == "sym":
            return SymFamilyParams.from_vector(theta)
        return DComputableParams.from_vector(theta, self.k)

    def matrix(self, theta) -> np.ndarray:
        return amplitude_matrix(self.params(theta))

    def bracket(self, theta) -> complex:
        return bracket_form(self.params(theta))

    def concurrence_form(self, theta) -> complex:
        """q(theta) = N [A]; |q| is the generalized concurrence when normalized."""
        return self.n * self.bracket(theta)

    def basis(self) -> np.ndarray:
        return _family_basis(self.kind, self.k)


def family(kind: str, k: int = 1) -> Family:
    if kind not in FAMILIES:
        raise ValidationError(f"unknown family {kind!r}; expected one of {FAMILIES}")
    if k < 1:
        raise DomainError("k must be >= 1")
    if kind == "sym" and k != 1:
        raise ValidationError("the sym family only exists for k = 1 (N = 4)")
    return Family(kind, k)


def family_of(params) -> Family:
    if isinstance(params, SymFamilyParams):
        return Family("sym", 1)
    return Family("recursive", params.k)


@lru_cache(maxsize=None)
def _family_basis(kind, k) -> np.ndarray:
    fam = Family(kind, k)
    cols = []
    for i in range(fam.n_params):
        theta = np.zeros(fam.n_params, dtype=complex)
        theta[i] = 1
        cols.append(fam.matrix(theta).reshape(-1))
    b = np.array(cols).T
    b.setflags(write=False)
    return b


def project_vector(psi, fam: Family):
    """Least-squares parameters and residual norm of a state vector."""
    b = fam.basis()
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != b.shape[0]:
        raise DimensionError(f"state has dimension {psi.size}, family needs {b.shape[0]}")
    theta = (b.conj().T @ psi) / np.sum(np.abs(b) ** 2, axis=0)
    residual = float(np.linalg.norm(psi - b @ theta))
    return theta, residual


def family_project(psi: PureState, k: int, family_kind: str = "recursive", tol: float = 1e-8):
    fam = family(family_kind, k)
    if psi.n != fam.n:
        raise DimensionError(f"state has N={psi.n}, {family_kind} family with k={k} has N={fam.n}")
    theta, residual = project_vector(psi.vector, fam)
    if residual > tol:
        raise NotInFamilyError(
            f"state is not in the {family_kind} family (residual {residual:.3e})", residual
        )
    return fam.params(theta)


@dataclass(frozen=True)
class IdentityReport:
    k: int
    det_residual: float
    charpoly_residual: float
    multiplicity_ok: bool
    cluster_sizes: tuple
    max_residual: float
    passed: bool


def _poly_power(base, power):
    out = np.array([1.0 + 0j])
    for _ in range(power):
        out = np.convolve(out, base)
    return out


def verify_identities(params, tol: float = 1e-8) -> IdentityReport:
    """Numerical check of the determinant and characteristic-polynomial identities.

    Parameters are rescaled to unit trace first (both identities are
    homogeneous). Violations are reported, not raised.
    """
    params = normalize_params(params)
    a = amplitude_matrix(params)
    n = a.shape[0]
    half = n // 2
    m = a @ a.conj().T
    br2 = abs(bracket_form(params)) ** 2
    nrm = norm_form(params)

    sign, logdet = np.linalg.slogdet(m)
    if br2 == 0.0 or sign == 0:
        det = np.linalg.det(m).real
        det_res = abs(det - br2**half)
    else:
        det_res = abs(np.expm1(logdet.real - half * np.log(br2)))

    w = np.linalg.eigvalsh(m)[::-1]
    got = np.poly(w).real
    want = _poly_power(np.array([1.0, -nrm, br2]), half).real
    scale = np.maximum(np.abs(want), np.finfo(float).tiny)
    # Coefficients below rounding level of the largest one compare absolutely.
    floor = 1e-14 * np.abs(want).max()
    coef_res = np.abs(got - want) / np.maximum(scale, floor)
    cp_res = float(coef_res.max())

    tol_c = CLUSTER_TOL * max(w[0], np.finfo(float).tiny)
    clusters = cluster_eigenvalues(w, tol_c)
    sizes = tuple(c for _, c in clusters)
    mult_ok = sizes in ((half, half), (n,)) or (len(sizes) == 1 and sizes[0] == n)
    worst = max(float(det_res), cp_res)
    return IdentityReport(
        k=params.k,
        det_residual=float(det_res),
        charpoly_residual=cp_res,
        multiplicity_ok=bool(mult_ok),
        cluster_sizes=sizes,
        max_residual=worst,
        passed=bool(mult_ok and worst < tol),
    )


def random_params(kind: str, k: int, rng, normalize: bool = True):
    """Complex Gaussian parameters for the given family."""
    fam = family(kind, k)
    rng = np.random.default_rng(rng)
    theta = rng.standard_normal(fam.n_params) + 1j * rng.standard_normal(fam.n_params)
    p = fam.params(theta)
    return normalize_params(p) if normalize else p
