"""Canonical JSON encodings: sorted keys, ints only."""
from __future__ import annotations

import json
from typing import Any, Optional

from .errors import LatticeError
from .isometries import Isometry, IsometryClass, verify_isometry
from .lattice_core import BasisTag, LatticeVector, change_basis, make_lattice


def dumps(obj: Any, indent: Optional[int] = None) -> str:
    return json.dumps(obj, sort_keys=True, indent=indent, separators=None if indent else (",", ":"))


def _basis(value: Any, default: BasisTag | str) -> BasisTag:
    raw = default if value is None else value
    try:
        return BasisTag(str(raw.value if isinstance(raw, BasisTag) else raw).upper())
    except ValueError:
        raise LatticeError("bad_basis", f"unknown basis {raw!r}") from None


def _ints(xs: Any, what: str) -> list[int]:
    if not isinstance(xs, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in xs):
        raise LatticeError("bad_json", f"{what} must be a list of integers")
    return xs


def vector_to_json(x: LatticeVector, basis: BasisTag | str | None = None) -> dict:
    if basis is not None:
        x = change_basis(x, _basis(basis, x.basis))
    return {"N": x.N, "basis": x.basis.value, "coords": list(x.coords)}


def vector_from_json(obj: Any, N: Optional[int] = None, basis: BasisTag | str = BasisTag.HE) -> LatticeVector:
    """Accepts {"basis", "coords", "N"?} or a bare list of coordinates."""
    if isinstance(obj, list):
        obj = {"coords": obj}
    if not isinstance(obj, dict) or "coords" not in obj:
        raise LatticeError("bad_json", "a vector is {\"basis\": ..., \"coords\": [...]} or a list")
    coords = _ints(obj["coords"], "coords")
    n = obj.get("N", N if N is not None else len(coords) - 1)
    if N is not None and n != N:
        raise LatticeError("bad_shape", f"vector has N = {n}, expected {N}")
    if len(coords) != n + 1:
        raise LatticeError("bad_shape", f"expected {n + 1} coordinates, got {len(coords)}")
    L = make_lattice(n, _basis(obj.get("basis"), basis))
    return L.vector(coords)


def matrix_to_json(f: Isometry, basis: BasisTag | str | None = None) -> dict:
    if basis is not None:
        f = f.in_basis(_basis(basis, f.lattice.basis))
    return {"N": f.N, "basis": f.lattice.basis.value, "matrix": [list(r) for r in f.matrix]}


def matrix_from_json(obj: Any, N: Optional[int] = None, basis: BasisTag | str = BasisTag.HE) -> Isometry:
    """Accepts {"basis", "matrix", "N"?} or a bare list of rows; checks the form is preserved."""
    if isinstance(obj, list):
        obj = {"matrix": obj}
    if not isinstance(obj, dict) or "matrix" not in obj or not isinstance(obj["matrix"], list):
        raise LatticeError("bad_json", "a matrix is {\"basis\": ..., \"matrix\": [[...], ...]} or a list of rows")
    rows = [_ints(r, "matrix rows") for r in obj["matrix"]]
    n = obj.get("N", N if N is not None else len(rows) - 1)
    if N is not None and n != N:
        raise LatticeError("bad_shape", f"matrix has N = {n}, expected {N}")
    if n < 1:
        raise LatticeError("bad_shape", "matrix is too small")
    L = make_lattice(n, _basis(obj.get("basis"), basis))
    return verify_isometry(L, rows)


def classification_to_json(c: IsometryClass, basis: BasisTag | str | None = None) -> dict:
    out: dict = {"type": c.kind, "on_hyperboloid": c.on_hyperboloid}
    if c.order is not None:
        out["order"] = c.order
    if c.fixed_class is not None:
        out["fixed_class"] = vector_to_json(c.fixed_class, basis)
    return out


def decomposition_to_json(dec) -> dict:
    from .stabilizers import letter_name

    return {
        "lambda_generator_word": list(dec.lambda_.generator_word),
        "lambda_even_vector": list(dec.lambda_.even_vector),
        "sigma": {
            "perm": list(dec.sigma.perm),
            "signs": list(dec.sigma.signs),
            "word": [letter_name(x) for x in dec.sigma.reflection_word],
        },
        "verified": dec.recompose() == dec.h,
    }


def word_to_json(w, action: Isometry, verified: bool, basis: BasisTag | str | None = None) -> dict:
    return {
        "letters": [{"sym": x.sym, "k": x.k, "power": x.power} for x in w.letters],
        "support": sorted(w.support, key=lambda s: (s[0], int(s[1:]))),
        "fiber_breaking": sorted(w.fiber_breaking, key=lambda s: (s[0], int(s[1:]))),
        "homology_action": matrix_to_json(action, basis),
        "verified": verified,
    }


def error_to_json(exc: LatticeError) -> dict:
    return {"error": exc.code, "message": str(exc)}
