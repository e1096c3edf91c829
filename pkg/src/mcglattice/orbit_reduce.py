"""Moving a primitive isotropic class to v, for 2 <= N <= 8.

The construction: pick a dual partner u of w, use a norm -1 vector of
Z{w, u}^perp to make the partner isotropic, then diagonalize the
remaining negative definite part. The resulting frame (w, u'', D) is
isometric to (v, s, e_1, ..., e_{N-1}), and the inverse of that frame map
sends w to v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import intlinalg as il
from .errors import LatticeError
from .isometries import Isometry
from .lattice_core import (
    BasisTag,
    Lattice,
    LatticeVector,
    Sublattice,
    change_basis,
    find_dual_partner,
    form_eval,
    is_isotropic,
    is_primitive,
    make_lattice,
    orthogonal_complement,
    sign_normalize,
    sve_to_he,
)


@dataclass(frozen=True)
class DefiniteDiagonalization:
    input: Sublattice
    ortho_basis: tuple[LatticeVector, ...]

    def gram(self) -> il.Matrix:
        L = self.input.ambient
        return tuple(tuple(form_eval(L, a, b) for b in self.ortho_basis) for a in self.ortho_basis)


def _norm_minus_one_vectors(S: Sublattice) -> list[LatticeVector]:
    """Every x in S with Q(x, x) = -1, one per +-pair, best first.

    "Best" is the tie-break used throughout: sign-normalized, then
    lexicographically greatest HE coordinates, so classes with an early
    nonzero coordinate come first (e_1 = H - E_1 - E_2 precedes E_3).
    """
    if S.rank == 0:
        return []
    pos = tuple(tuple(-x for x in row) for row in S.gram)
    for k in range(1, S.rank + 1):
        if il.det(tuple(row[:k] for row in pos[:k])) <= 0:
            raise LatticeError("not_negative_definite", "sublattice is not negative definite")
    t, reduced = il.gram_lll(pos)
    found = {}
    for y in il.short_vectors(reduced, 1):
        coeffs = [sum(yi * t[i][j] for i, yi in enumerate(y)) for j in range(S.rank)]
        x = sign_normalize(S.combine(coeffs))
        found[x.he_coords()] = x
    return [found[k] for k in sorted(found, reverse=True)]


def find_norm_minus_one(S: Sublattice) -> LatticeVector:
    vecs = _norm_minus_one_vectors(S)
    if not vecs:
        raise LatticeError(
            "no_norm_minus_one",
            "sublattice has no vector of norm -1 (even lattice; outside the N <= 8 regime)")
    return vecs[0]


def diagonalize_definite(S: Sublattice) -> DefiniteDiagonalization:
    """Split off norm -1 vectors one at a time.

    The norm -1 vectors of x^perp inside S are exactly the norm -1 vectors
    of S orthogonal to x, so one enumeration serves every round of the
    recursion.
    """
    L = S.ambient
    pool = _norm_minus_one_vectors(S)
    chosen: list[LatticeVector] = []
    while len(chosen) < S.rank:
        nxt = next((x for x in pool if all(form_eval(L, x, c) == 0 for c in chosen)), None)
        if nxt is None:
            raise LatticeError(
                "no_norm_minus_one",
                "orthogonal complement has no vector of norm -1; lattice is not diagonal")
        chosen.append(nxt)
        pool = [x for x in pool if x is not nxt]
    return DefiniteDiagonalization(S, tuple(chosen))


def reduce_isotropic(L: Lattice, w: LatticeVector, partner: Optional[LatticeVector] = None) -> Isometry:
    """An isometry f with f(w) = v.

    ``partner`` overrides the canonical dual partner (any u with
    Q(w, u) = 1), which exercises the isotropic correction step when u is
    not already isotropic.
    """
    if not 2 <= L.N <= 8:
        raise LatticeError("n_out_of_range", f"orbit reduction needs 2 <= N <= 8, got N = {L.N}")
    if w.is_zero() or not is_primitive(w):
        raise LatticeError("not_primitive", "w must be primitive")
    if not is_isotropic(L, w):
        raise LatticeError("not_isotropic", "w must be isotropic")
    he = make_lattice(L.N, BasisTag.HE)
    w = change_basis(w, BasisTag.HE)
    if partner is None:
        u = find_dual_partner(he, w)
    else:
        u = change_basis(partner, BasisTag.HE)
        if form_eval(he, w, u) != 1:
            raise LatticeError("bad_partner", "partner must satisfy Q(w, u) = 1")

    a = form_eval(he, u, u)
    if a:
        w0 = find_norm_minus_one(orthogonal_complement(he, [w, u]))
        u1 = u - a * w0
    else:
        # u - a w0 = u whatever w0 is; skip the search
        u1 = u
    q1 = form_eval(he, u1, u1)
    assert q1 == a - a * a and q1 % 2 == 0
    u2 = u1 - (q1 // 2) * w
    assert form_eval(he, w, u2) == 1 and form_eval(he, u2, u2) == 0

    diag = diagonalize_definite(orthogonal_complement(he, [w, u2]))
    # frame map: s -> u'', v -> w, e_i -> D_i, written HE -> HE
    frame = il.from_columns([u2.coords, w.coords] + [d.coords for d in diag.ortho_basis])
    F = Isometry(he, il.matmul(frame, il.unimodular_inverse(sve_to_he(L.N))))
    f = F.inverse()
    if il.matmul(il.matmul(il.transpose(f.matrix), he.gram), f.matrix) != he.gram:
        raise AssertionError("frame map is not an isometry")
    if f(w) != he.v():
        raise AssertionError("reduction does not send w to v")
    return f.in_basis(L.basis)


def enumerate_primitive_isotropic(L: Lattice, bound: int) -> list[LatticeVector]:
    """Primitive isotropic classes with |HE coordinates| <= bound.

    Isotropic and nonzero forces H-coordinate x0 != 0, so sign normalization
    means x0 > 0 and the remaining coordinates satisfy sum x_i^2 = x0^2.
    Sorted lexicographically by HE coordinates.
    """
    if bound < 0:
        raise LatticeError("bad_bound", "bound must be nonnegative")
    n = L.N
    out = []
    for x0 in range(1, bound + 1):
        for rest in _sphere_points(n, x0 * x0, bound):
            x = (x0, *rest)
            if il.content(x) == 1:
                out.append(x)
    out.sort()
    he = make_lattice(n, BasisTag.HE)
    return [change_basis(he.vector(x), L.basis) for x in out]


def _sphere_points(n: int, r: int, bound: int):
    if n == 0:
        if r == 0:
            yield ()
        return
    for x in range(-bound, bound + 1):
        if x * x <= r:
            for rest in _sphere_points(n - 1, r - x * x, bound):
                yield (x, *rest)
