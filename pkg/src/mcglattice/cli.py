"""Command-line front end. Commands print one JSON document; verify prints a table.

Exit codes: 0 success, 1 domain error (JSON error object on stdout),
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import checks
from . import intlinalg as il
from .errors import LatticeError
from .fibration_model import homology_action, realize, realize_general, word_action_in
from .isometries import classify, eichler, reflection
from .lattice_core import BasisTag, change_basis, make_lattice
from .orbit_reduce import enumerate_primitive_isotropic, reduce_isotropic
from .serialize import (
    classification_to_json,
    decomposition_to_json,
    dumps,
    error_to_json,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
    word_to_json,
)
from .stabilizers import stab_decompose


class UsageError(Exception):
    pass


def _basis_arg(s: str) -> BasisTag:
    try:
        return BasisTag(s.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"basis must be HE or SVE, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of blow-ups N (inferred from input when omitted)")
    common.add_argument("--basis", type=_basis_arg, default=BasisTag.HE,
                        help="basis for bare inputs and for all output (HE or SVE, default HE)")
    common.add_argument("--json-indent", type=int, default=None, help="pretty-print with this indent")

    p = argparse.ArgumentParser(prog="mcglattice", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def matrix_flags(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--matrix", help="inline JSON matrix")
        g.add_argument("--matrix-file", type=Path, help="file holding a JSON matrix")

    sp = sub.add_parser("classify", parents=[common], help="elliptic / parabolic / hyperbolic")
    matrix_flags(sp)

    sp = sub.add_parser("reduce", parents=[common], help="isometry sending an isotropic w to v")
    sp.add_argument("--vector", required=True, help="JSON vector w")

    sp = sub.add_parser("decompose", parents=[common], help="split h in Stab(v) as f o sigma")
    matrix_flags(sp)

    sp = sub.add_parser("realize", parents=[common], help="recipe word realizing h in Stab(w)")
    matrix_flags(sp)
    sp.add_argument("--vector", help="JSON vector w fixed by h (default v)")

    sp = sub.add_parser("eichler", parents=[common], help="the Eichler transformation E(w, e)")
    sp.add_argument("--vector", required=True, help="JSON isotropic vector w")
    sp.add_argument("--e", required=True, help="JSON vector e, orthogonal to w with even norm")

    sp = sub.add_parser("reflect", parents=[common], help="the reflection Ref_u")
    sp.add_argument("--vector", required=True, help="JSON vector u with Q(u, u) in {+-1, +-2}")

    sp = sub.add_parser("enumerate", parents=[common], help="primitive isotropic classes in a box")
    sp.add_argument("--bound", type=int, required=True)

    sp = sub.add_parser("verify", parents=[common], help="run the full verification suite")
    sp.add_argument("--n-max", type=int, default=checks.N_MAX)
    sp.add_argument("--seed", type=int, default=0)
    return p


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def _matrix(args):
    if args.matrix is not None:
        obj = _load_json(args.matrix, "--matrix")
    else:
        try:
            obj = _load_json(args.matrix_file.read_text(), str(args.matrix_file))
        except OSError as exc:
            raise UsageError(f"cannot read {args.matrix_file}: {exc}") from None
    return matrix_from_json(obj, args.n, args.basis)


def _vector(args, text: str, flag: str, N: Optional[int] = None):
    return vector_from_json(_load_json(text, flag), N if N is not None else args.n, args.basis)


def cmd_classify(args) -> dict:
    return classification_to_json(classify(_matrix(args)), args.basis)


def cmd_reduce(args) -> dict:
    w = _vector(args, args.vector, "--vector")
    L = make_lattice(w.N, w.basis)
    f = reduce_isotropic(L, w)
    m = f.matrix
    return {
        "w": vector_to_json(w, args.basis),
        "f": matrix_to_json(f, args.basis),
        "checks": {
            "maps_w_to_v": f(w) == L.v(),
            "is_isometry": il.matmul(il.matmul(il.transpose(m), L.gram), m) == L.gram,
        },
    }


def cmd_decompose(args) -> dict:
    h = _matrix(args)
    out = decomposition_to_json(stab_decompose(h))
    out["h"] = matrix_to_json(h, args.basis)
    return out


def cmd_realize(args) -> dict:
    h = _matrix(args)
    if args.vector is None:
        rec = realize(h)
        act = homology_action(rec)
        return word_to_json(rec, act, act == h.in_basis(BasisTag.SVE), args.basis)
    w = _vector(args, args.vector, "--vector", h.N)
    alpha, rec = realize_general(h, w)
    back = word_action_in(rec, h.lattice.basis, alpha)
    out = word_to_json(rec, homology_action(rec), back == h, args.basis)
    out["alpha"] = matrix_to_json(alpha, args.basis)
    out["w"] = vector_to_json(w, args.basis)
    return out


def cmd_eichler(args) -> dict:
    w = _vector(args, args.vector, "--vector")
    e = change_basis(_vector(args, args.e, "--e", w.N), w.basis)
    return matrix_to_json(eichler(make_lattice(w.N, w.basis), w, e), args.basis)


def cmd_reflect(args) -> dict:
    u = _vector(args, args.vector, "--vector")
    return matrix_to_json(reflection(make_lattice(u.N, u.basis), u), args.basis)


def cmd_enumerate(args) -> dict:
    if args.n is None:
        raise UsageError("enumerate needs --n")
    if args.bound < 0:
        raise LatticeError("bad_bound", "bound must be nonnegative")
    L = make_lattice(args.n, args.basis)
    vecs = enumerate_primitive_isotropic(L, args.bound)
    return {"N": args.n, "bound": args.bound, "count": len(vecs),
            "vectors": [vector_to_json(x) for x in vecs]}


def cmd_verify(args, out) -> int:
    results = checks.run_suite(args.n_max, args.seed)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}", file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return 1 if failed else 0


COMMANDS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "decompose": cmd_decompose,
    "realize": cmd_realize,
    "eichler": cmd_eichler,
    "reflect": cmd_reflect,
    "enumerate": cmd_enumerate,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "verify":
        return cmd_verify(args, out)
    try:
        result = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"mcglattice {args.command}: error: {exc}", file=err)
        return 2
    except LatticeError as exc:
        print(dumps(error_to_json(exc), args.json_indent), file=out)
        return 1
    print(dumps(result, args.json_indent), file=out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
