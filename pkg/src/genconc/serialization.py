"""JSON wire formats. Complex scalars travel as [re, im]."""
from __future__ import annotations

import json

import numpy as np

from .dcomputable import DComputableParams, SymFamilyParams
from .errors import ValidationError
from .states import DensityMatrix, Ensemble, PureState, make_pure


def cplx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def parse_cplx(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ValidationError(f"complex scalar must be [re, im], got {x!r}")
    try:
        return complex(float(x[0]), float(x[1]))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad complex scalar {x!r}") from exc


def cmatrix(m) -> list:
    return [[cplx(z) for z in row] for row in np.asarray(m)]


def parse_cmatrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError("matrix must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("matrix rows have different lengths")
    return np.array([[parse_cplx(z) for z in r] for r in rows], dtype=complex)


def pure_to_json(psi: PureState) -> dict:
    return {"n": psi.n, "a": cmatrix(psi.a)}


def pure_from_json(obj, normalize=False) -> PureState:
    _require(obj, "n", "a")
    a = parse_cmatrix(obj["a"])
    if a.shape != (obj["n"], obj["n"]):
        raise ValidationError(f"'a' has shape {a.shape}, expected n x n with n={obj['n']}")
    return make_pure(a, normalize=normalize)


def density_to_json(rho: DensityMatrix) -> dict:
    return {"dim": rho.dim, "m": cmatrix(rho.m)}


def density_from_json(obj) -> DensityMatrix:
    _require(obj, "dim", "m")
    m = parse_cmatrix(obj["m"])
    if m.shape != (obj["dim"], obj["dim"]):
        raise ValidationError(f"'m' has shape {m.shape}, expected dim x dim with dim={obj['dim']}")
    return DensityMatrix.from_matrix(m)


def ensemble_to_json(e: Ensemble) -> dict:
    return {"states": [[cplx(z) for z in row] for row in e.states]}


def ensemble_from_json(obj) -> Ensemble:
    _require(obj, "states")
    states = obj["states"]
    if not isinstance(states, list) or not states:
        raise ValidationError("'states' must be a non-empty list")
    return Ensemble(parse_cmatrix(states))


def params_to_json(params) -> dict:
    if isinstance(params, SymFamilyParams):
        out = {"family": "sym"}
        out.update({n: cplx(getattr(params, n)) for n in SymFamilyParams.names})
        return out
    return {
        "family": "recursive",
        "k": params.k,
        "base": {"a": cplx(params.a), "c": cplx(params.c), "d": cplx(params.d)},
        "ladder": [[cplx(b), cplx(c)] for b, c in params.ladder],
    }


def params_from_json(obj):
    if not isinstance(obj, dict):
        raise ValidationError("parameter file must hold a JSON object")
    kind = obj.get("family", "recursive")
    if kind == "sym":
        unknown = set(obj) - set(SymFamilyParams.names) - {"family"}
        if unknown:
            raise ValidationError(f"unknown sym parameters {sorted(unknown)}")
        return SymFamilyParams(**{n: parse_cplx(obj.get(n, [0, 0])) for n in SymFamilyParams.names})
    if kind != "recursive":
        raise ValidationError(f"unknown family {kind!r}")
    _require(obj, "k", "base", "ladder")
    base = obj["base"]
    ladder = obj["ladder"]
    if not isinstance(ladder, list) or len(ladder) != obj["k"]:
        raise ValidationError(f"ladder must hold k={obj['k']} pairs")
    pairs = []
    for pair in ladder:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValidationError("ladder entries must be [b, c] pairs")
        pairs.append((parse_cplx(pair[0]), parse_cplx(pair[1])))
    return DComputableParams(
        parse_cplx(base.get("a", [0, 0])),
        parse_cplx(base.get("c", [0, 0])),
        parse_cplx(base.get("d", [0, 0])),
        tuple(pairs),
    )


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from exc


def dumps(obj) -> str:
    # repr-based float output is the shortest string that round-trips exactly.
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return cplx(obj)
    return obj


def _require(obj, *keys):
    if not isinstance(obj, dict):
        raise ValidationError("expected a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise ValidationError(f"missing keys {missing}")
