"""Command-line front end over JSON files.

Exit status: 0 success, 2 validation error, 3 numerical failure,
4 state or density matrix outside the family / class.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import concurrence, dcomputable, mixed, pmatrix
from . import serialization as ser
from .errors import GenConcError, ValidationError

K_MAX = 4


def _k_from_dim(dim: int) -> int:
    k = int(round(np.log2(dim))) // 2 - 1
    if k < 1 or 2 ** (2 * k + 2) != dim:
        raise ValidationError(f"dimension {dim} is not 2^(2k+2) for any k >= 1")
    return k


def _p_for(args, dim: int):
    k = _k_from_dim(dim)
    if args.k is not None and args.k != k:
        raise ValidationError(f"--k {args.k} does not match dimension {dim} (k={k})")
    return pmatrix.derive_p(k, args.family), k


def _load_rho(args):
    obj = ser.load_json(args.input)
    if isinstance(obj, dict) and "states" in obj:
        from .states import ensemble_density

        return ensemble_density(ser.ensemble_from_json(obj))
    return ser.density_from_json(obj)


def cmd_construct(args):
    params = ser.params_from_json(ser.load_json(args.input))
    if params.k > K_MAX:
        raise ValidationError(f"k={params.k} exceeds the supported maximum {K_MAX}")
    if isinstance(params, dcomputable.SymFamilyParams):
        psi = dcomputable.build_A4_sym(params, normalize=not args.no_normalize)
    else:
        psi = dcomputable.build_A(params, normalize=not args.no_normalize)
    return ser.pure_to_json(psi)


def cmd_pure(args):
    psi = ser.pure_from_json(ser.load_json(args.input))
    return concurrence.pure_summary(psi, args.cluster_tol)


def cmd_mixed(args):
    rho = _load_rho(args)
    p, k = _p_for(args, rho.dim)
    res = mixed.mixed_concurrence(rho, p, k)
    return {
        "lambdas": res.lambdas,
        "raw": res.raw,
        "clamped": res.clamped,
        "eof": res.eof,
        "caveat": res.caveat,
    }


def cmd_decompose(args):
    rho = _load_rho(args)
    p, k = _p_for(args, rho.dim)
    res = mixed.mixed_concurrence(rho, p, k)
    out = {
        "raw": res.raw,
        "lambdas": res.lambdas,
        "optimal": ser.ensemble_to_json(mixed.optimal_decomposition(rho, p)),
        "equalized": None,
    }
    if res.raw >= 0:
        out["equalized"] = ser.ensemble_to_json(mixed.equalized_decomposition(rho, p))
    return out


def cmd_pmatrix(args):
    if args.paper_explicit:
        if args.family != "sym" or args.k != 1:
            raise ValidationError("--paper-explicit is only defined for --family sym --k 1")
        bm = pmatrix.p16_explicit()
    else:
        bm = pmatrix.derive_p(args.k, args.family)
    out = {"dim": bm.dim, "family": bm.family, "k": bm.k}
    if args.layout == "dense":
        out["p"] = bm.p.real
    else:
        out["entries"] = [list(t) for t in bm.triplets()]
    if args.diagnostics:
        if args.family != "recursive":
            raise ValidationError("--diagnostics compares the recursive-family description")
        out["diagnostics"] = pmatrix.p_diagnostics(args.k)
    return out


def cmd_verify(args):
    rng = np.random.default_rng(args.seed)
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        worst = 0.0
        failures = 0
        for _ in range(args.samples):
            params = dcomputable.random_params("recursive", k, rng)
            rep = dcomputable.verify_identities(params, args.tol)
            worst = max(worst, rep.max_residual)
            failures += not rep.passed
        rows.append({"k": k, "samples": args.samples, "max_residual": worst, "failures": failures})
    return {"rows": rows, "passed": all(r["failures"] == 0 for r in rows)}


def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    return {
        "params": [
            ser.params_to_json(dcomputable.random_params(args.family, args.k, rng))
            for _ in range(args.count)
        ]
    }


def _to_csv(result) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(result, dict) and "rows" in result:
        rows = result["rows"]
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow(r.values())
    elif isinstance(result, dict) and "entries" in result:
        w.writerow(["row", "col", "value"])
        w.writerows(result["entries"])
    else:
        flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list, np.ndarray)) or k == "lambdas"}
        if "lambdas" in flat:
            flat["lambdas"] = " ".join(repr(float(x)) for x in flat["lambdas"])
        w.writerow(flat.keys())
        w.writerow(flat.values())
    return buf.getvalue()


def _tol(x):
    v = float(x)
    if not 0 < v <= 1e-2:
        raise argparse.ArgumentTypeError("tol must lie in (0, 1e-2]")
    return v


def _k(x):
    v = int(x)
    if not 1 <= v <= K_MAX:
        raise argparse.ArgumentTypeError(f"k must lie in [1, {K_MAX}]")
    return v


def _positive(x):
    v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS,
                        help="write the result here instead of stdout")
    parser = argparse.ArgumentParser(
        prog="genconc", description=__doc__.splitlines()[0], parents=[common]
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="parameter JSON -> pure state JSON")
    p.add_argument("input")
    p.add_argument("--no-normalize", action="store_true",
                   help="use the parameters as given; they must already be normalized")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("pure", parents=[common], help="pure state JSON -> d, D, E and spectrum")
    p.add_argument("input")
    p.add_argument("--cluster-tol", type=_tol, default=concurrence.CLUSTER_TOL)
    p.set_defaults(func=cmd_pure)

    for name, func, text in (
        ("mixed", cmd_mixed, "density matrix or ensemble JSON -> Lambda, d(rho), E"),
        ("decompose", cmd_decompose, "density matrix JSON -> optimal and equalized ensembles"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("input")
        p.add_argument("--family", choices=dcomputable.FAMILIES, default="recursive")
        p.add_argument("--k", type=_k)
        p.set_defaults(func=func)

    p = sub.add_parser("pmatrix", parents=[common], help="emit the biform matrix p")
    p.add_argument("--k", type=_k, default=1)
    p.add_argument("--family", choices=dcomputable.FAMILIES, default="recursive")
    p.add_argument("--paper-explicit", action="store_true", help="the literal 16x16 entry list")
    p.add_argument("--layout", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--diagnostics", action="store_true")
    p.set_defaults(func=cmd_pmatrix)

    p = sub.add_parser("verify", parents=[common], help="random determinant / char-poly identity sweep")
    p.add_argument("--k-min", type=_k, default=1)
    p.add_argument("--k-max", type=_k, default=3)
    p.add_argument("--samples", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=_tol, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="random normalized family parameters")
    p.add_argument("--k", type=_k, default=1)
    p.add_argument("--family", choices=dcomputable.FAMILIES, default="recursive")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        result = args.func(args)
    except GenConcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    fmt = getattr(args, "format", "json")
    output = getattr(args, "output", None)
    text = _to_csv(ser._plain(result)) if fmt == "csv" else ser.dumps(result)
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
