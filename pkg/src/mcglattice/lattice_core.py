"""The odd unimodular lattices I_{1,N} = H_2(M_N; Z) in two bases.

HE is the blow-up basis (H, E_1, ..., E_N) with Gram diag(1, -1, ..., -1).
SVE is the ruled-surface basis (s, v, e_1, ..., e_{N-1}) where

    v = H - E_1,  s = H - E_2,  e_1 = H - E_1 - E_2,  e_k = E_{k+1} (k >= 2).

Matrices act on column vectors: column j is the image of basis vector j.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from math import isqrt
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import intlinalg as il
from .errors import LatticeError


class BasisTag(str, enum.Enum):
    HE = "HE"
    SVE = "SVE"


def _check_n(n: int, basis: BasisTag) -> None:
    if not isinstance(n, int) or n < 1:
        raise LatticeError("invalid_n", f"N must be a positive integer, got {n!r}")
    if basis is BasisTag.SVE and n < 2:
        raise LatticeError("invalid_basis", "the SVE basis needs N >= 2")


@lru_cache(maxsize=None)
def sve_to_he(n: int) -> il.Matrix:
    """Columns are the HE coordinates of s, v, e_1, ..., e_{N-1}."""
    cols = []
    s = [0] * (n + 1)
    s[0], s[2] = 1, -1
    v = [0] * (n + 1)
    v[0], v[1] = 1, -1
    e1 = [0] * (n + 1)
    e1[0], e1[1], e1[2] = 1, -1, -1
    cols += [s, v, e1]
    for k in range(2, n):
        ek = [0] * (n + 1)
        ek[k + 1] = 1
        cols.append(ek)
    return il.from_columns(cols)


@lru_cache(maxsize=None)
def he_to_sve(n: int) -> il.Matrix:
    return il.unimodular_inverse(sve_to_he(n))


@lru_cache(maxsize=None)
def gram_matrix(n: int, basis: BasisTag) -> il.Matrix:
    he = tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n + 1))
               for i in range(n + 1))
    if basis is BasisTag.HE:
        return he
    p = sve_to_he(n)
    return il.matmul(il.matmul(il.transpose(p), he), p)


@dataclass(frozen=True)
class Lattice:
    N: int
    basis: BasisTag
    gram: il.Matrix = field(repr=False)

    @property
    def rank(self) -> int:
        return self.N + 1

    def vector(self, coords: Iterable[int]) -> LatticeVector:
        return LatticeVector(self.N, self.basis, tuple(coords))

    def zero(self) -> LatticeVector:
        return self.vector([0] * self.rank)

    def basis_vector(self, i: int) -> LatticeVector:
        return self.vector(int(j == i) for j in range(self.rank))

    # named classes; the SVE names are valid in either basis
    def H(self) -> LatticeVector:
        return change_basis(LatticeVector(self.N, BasisTag.HE, il.identity(self.rank)[0]), self.basis)

    def E(self, i: int) -> LatticeVector:
        x = [0] * self.rank
        x[i] = 1
        return change_basis(LatticeVector(self.N, BasisTag.HE, tuple(x)), self.basis)

    def s(self) -> LatticeVector:
        return self._sve(0)

    def v(self) -> LatticeVector:
        return self._sve(1)

    def e(self, k: int) -> LatticeVector:
        if not 1 <= k <= self.N - 1:
            raise LatticeError("index_out_of_range", f"e_{k} is not defined for N = {self.N}")
        return self._sve(k + 1)

    def _sve(self, i: int) -> LatticeVector:
        if self.N < 2:
            raise LatticeError("invalid_basis", "s, v, e_k need N >= 2")
        x = [0] * self.rank
        x[i] = 1
        return change_basis(LatticeVector(self.N, BasisTag.SVE, tuple(x)), self.basis)


@dataclass(frozen=True)
class LatticeVector:
    N: int
    basis: BasisTag
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.N + 1:
            raise LatticeError(
                "bad_length", f"expected {self.N + 1} coordinates, got {len(self.coords)}")

    def _same(self, other: LatticeVector) -> None:
        if (self.N, self.basis) != (other.N, other.basis):
            raise LatticeError("basis_mismatch", "vectors live in different lattices or bases")

    def __add__(self, other: LatticeVector) -> LatticeVector:
        self._same(other)
        return LatticeVector(self.N, self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        self._same(other)
        return LatticeVector(self.N, self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> LatticeVector:
        return LatticeVector(self.N, self.basis, tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> LatticeVector:
        return LatticeVector(self.N, self.basis, tuple(k * a for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def he_coords(self) -> tuple[int, ...]:
        return change_basis(self, BasisTag.HE).coords


@dataclass(frozen=True)
class Sublattice:
    ambient: Lattice
    basis_vectors: tuple[LatticeVector, ...]
    gram: il.Matrix

    @property
    def rank(self) -> int:
        return len(self.basis_vectors)

    def coords_matrix(self) -> il.Matrix:
        """Rows are the ambient coordinates of the basis vectors."""
        return tuple(b.coords for b in self.basis_vectors)

    def combine(self, coeffs: Sequence[int]) -> LatticeVector:
        out = [0] * self.ambient.rank
        for c, b in zip(coeffs, self.basis_vectors):
            if c:
                for i, x in enumerate(b.coords):
                    out[i] += c * x
        return self.ambient.vector(out)


def make_lattice(N: int, basis: BasisTag | str = BasisTag.HE) -> Lattice:
    basis = BasisTag(basis)
    _check_n(N, basis)
    return Lattice(N, basis, gram_matrix(N, basis))


def change_basis(x: LatticeVector, to: BasisTag | str) -> LatticeVector:
    to = BasisTag(to)
    if x.basis is to:
        return x
    _check_n(x.N, BasisTag.SVE)
    m = sve_to_he(x.N) if to is BasisTag.HE else he_to_sve(x.N)
    return LatticeVector(x.N, to, il.matvec(m, x.coords))


def convert_matrix(m: il.Matrix, n: int, frm: BasisTag | str, to: BasisTag | str) -> il.Matrix:
    """Re-express a linear map of H_2(M_N) given in basis ``frm`` in basis ``to``."""
    frm, to = BasisTag(frm), BasisTag(to)
    if frm is to:
        return m
    _check_n(n, BasisTag.SVE)
    p = sve_to_he(n)
    pinv = he_to_sve(n)
    if frm is BasisTag.SVE:
        return il.matmul(il.matmul(p, m), pinv)
    return il.matmul(il.matmul(pinv, m), p)


def _check_in(L: Lattice, x: LatticeVector) -> None:
    if (x.N, x.basis) != (L.N, L.basis):
        raise LatticeError(
            "basis_mismatch",
            f"vector in ({x.N}, {x.basis.value}) used with lattice ({L.N}, {L.basis.value})")


def form_eval(L: Lattice, x: LatticeVector, y: LatticeVector) -> int:
    _check_in(L, x)
    _check_in(L, y)
    return il.bilinear(x.coords, L.gram, y.coords)


def is_primitive(x: LatticeVector) -> bool:
    if x.is_zero():
        raise LatticeError("zero_vector", "primitivity is undefined for the zero vector")
    return il.content(x.coords) == 1


def is_isotropic(L: Lattice, x: LatticeVector) -> bool:
    return not x.is_zero() and form_eval(L, x, x) == 0


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Canonical basis of the saturated kernel {x : M x = 0} (row HNF)."""
    return il.kernel(M, ncols)


def sublattice(L: Lattice, vectors: Sequence[LatticeVector]) -> Sublattice:
    for x in vectors:
        _check_in(L, x)
    g = tuple(tuple(form_eval(L, a, b) for b in vectors) for a in vectors)
    return Sublattice(L, tuple(vectors), g)


def orthogonal_complement(L: Lattice, vs: Sequence[LatticeVector]) -> Sublattice:
    for x in vs:
        _check_in(L, x)
    if vs and il.row_rank([x.coords for x in vs]) < len(vs):
        raise LatticeError("dependent_vectors", "input vectors are linearly dependent")
    rows = [il.matvec(L.gram, x.coords) for x in vs]
    basis = integer_kernel(rows, L.rank)
    return sublattice(L, [L.vector(b) for b in basis])


def sign_normalize(x: LatticeVector) -> LatticeVector:
    """Flip x so its first nonzero HE coordinate is positive."""
    for c in x.he_coords():
        if c:
            return x if c > 0 else -x
    return x


def find_dual_partner(L: Lattice, w: LatticeVector) -> LatticeVector:
    """A vector u with Q(w, u) = 1, chosen canonically.

    Work happens in HE coordinates so the answer names the same homology
    class whichever basis L uses. The target order is (|Q(u, u)|, Euclidean
    length, lexicographic coordinates).

    For isotropic w and N >= 2 the minimum is found exactly: |Q(u, u)| = 0
    is attainable and an isotropic u has squared length 2 u_0^2, so the
    search runs over u_0 = 1, 2, ... and stops at the first sphere that
    holds a solution.

    Otherwise the extended-gcd solution is size-reduced against an
    LLL-reduced basis of the kernel of Q(w, .) and improved by descent over
    one- and two-step moves in that basis; the result is a fixed function
    of w but only a local minimum.
    """
    _check_in(L, w)
    if w.is_zero() or not is_primitive(w):
        raise LatticeError("not_primitive", "w must be primitive for a dual partner to exist")
    he = make_lattice(L.N, BasisTag.HE)
    wh = change_basis(w, BasisTag.HE).coords
    g = il.matvec(he.gram, wh)
    if il.content(g) != 1:
        raise LatticeError("not_primitive", "w must be primitive for a dual partner to exist")
    if L.N >= 2 and il.bilinear(wh, he.gram, wh) == 0:
        u = _isotropic_partner(wh)
    else:
        u = _canonical_partner(he.gram, wh, g, il.solve_linear_form(g))
    return change_basis(he.vector(u), L.basis)


def _canonical_partner(gram, w, g, x0):
    n = len(w)
    kb = il.kernel([g], n)
    if kb:
        euclid = tuple(tuple(sum(a * b for a, b in zip(p, q)) for q in kb) for p in kb)
        t, _ = il.gram_lll(euclid)
        kb = [tuple(sum(c * b[i] for c, b in zip(row, kb)) for i in range(n)) for row in t]
    q = lambda x: il.bilinear(x, gram, x)
    qw = lambda x: il.bilinear(x, gram, w)

    def add(x, y, k=1):
        return tuple(a + k * b for a, b in zip(x, y))

    # Babai size reduction of x0 against the reduced kernel basis
    u = x0
    if kb:
        for _ in range(2):
            for b in reversed(kb):
                bb = sum(c * c for c in b)
                k = round(Fraction(sum(a * c for a, c in zip(u, b)), bb))
                if k:
                    u = add(u, b, -k)

    qww = q(w)
    odd = next((b for b in kb if q(b) % 2), None) if qww == 0 else None

    def settle(x):
        # w lies in its own orthogonal complement only when isotropic; then
        # fix parity and slide along w, since Q(x + t w) = Q(x) + 2t.
        if qww:
            return x
        if q(x) % 2 and odd is not None:
            x = add(x, odd)
        t = -(q(x) // 2)
        return min(add(x, w, t), add(x, w, t - 1), key=key)

    def key(x):
        return (abs(q(x)), sum(c * c for c in x), x)

    u = settle(u)
    moves = []
    for i, b in enumerate(kb):
        moves += [b, tuple(-c for c in b)]
        for c in kb[i:]:
            for e1 in (1, -1):
                for e2 in (1, -1):
                    moves.append(tuple(e1 * x + e2 * y for x, y in zip(b, c)))
    best = key(u)
    improved = True
    while improved:
        improved = False
        for m in moves:
            cand = settle(add(u, m))
            kc = key(cand)
            if kc < best:
                u, best, improved = cand, kc, True
    assert qw(u) == 1
    return u



def _isotropic_partner(w: Sequence[int]) -> tuple[int, ...]:
    # HE coordinates: Q(w, u) = w0 u0 - w'.u', isotropic u has |u'| = |u0|
    w0, wp = w[0], list(w[1:])
    sign = 1
    if w0 < 0:
        # Q(-w, -u) = Q(w, u): solve for -w and negate
        w0, wp, sign = -w0, [-c for c in wp], -1
    n = len(wp)
    tail = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] + wp[i] * wp[i]
    m = 1
    while True:
        for u0 in (-m, m):
            found = _sphere_search(wp, tail, m * m, w0 * u0 - 1)
            if found is not None:
                u = (u0, *found)
                return tuple(sign * c for c in u) if sign < 0 else u
        m += 1


def _sphere_search(wp, tail, radius_sq, target):
    """Lexicographically least u' with |u'|^2 = radius_sq and wp.u' = target."""
    n = len(wp)
    x = [0] * n

    def rec(i, r, t):
        if i == n:
            return r == 0 and t == 0
        # Cauchy-Schwarz: |t| <= |wp[i:]| sqrt(r)
        if t * t > tail[i] * r:
            return False
        b = isqrt(r)
        for xi in range(-b, b + 1):
            x[i] = xi
            if rec(i + 1, r - xi * xi, t - wp[i] * xi):
                return True
        x[i] = 0
        return False

    return tuple(x) if rec(0, radius_sq, target) else None
