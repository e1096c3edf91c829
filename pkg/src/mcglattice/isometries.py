"""Elements of O(1,N)(Z): reflections, Eichler transformations, classification."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Optional, Sequence

from sympy import Poly, ZZ, cyclotomic_poly, divisors, symbols, totient
from sympy.polys.matrices import DomainMatrix

from . import intlinalg as il
from .errors import LatticeError
from .lattice_core import (
    BasisTag,
    Lattice,
    LatticeVector,
    convert_matrix,
    form_eval,
    integer_kernel,
    is_isotropic,
    is_primitive,
    make_lattice,
    sign_normalize,
)

_x = symbols("x")


@lru_cache(maxsize=None)
def _gram_inverse(gram: il.Matrix) -> il.Matrix:
    return il.unimodular_inverse(gram)


@dataclass(frozen=True)
class Isometry:
    """An integer matrix preserving the lattice form.

    Column j is the image of basis vector j, so composition f @ g means
    "apply g, then f", matching the usual f o g.
    """

    lattice: Lattice
    matrix: il.Matrix

    @property
    def N(self) -> int:
        return self.lattice.N

    def __matmul__(self, other: Isometry) -> Isometry:
        if (self.lattice.N, self.lattice.basis) != (other.lattice.N, other.lattice.basis):
            raise LatticeError("basis_mismatch", "cannot compose isometries of different lattices")
        return Isometry(self.lattice, il.matmul(self.matrix, other.matrix))

    def __call__(self, x: LatticeVector) -> LatticeVector:
        if (x.N, x.basis) != (self.lattice.N, self.lattice.basis):
            raise LatticeError("basis_mismatch", "vector and isometry use different bases")
        return self.lattice.vector(il.matvec(self.matrix, x.coords))

    def inverse(self) -> Isometry:
        # f^-1 = G^-1 f^t G for any f preserving G
        g = self.lattice.gram
        m = il.matmul(il.matmul(_gram_inverse(g), il.transpose(self.matrix)), g)
        return Isometry(self.lattice, m)

    def __pow__(self, k: int) -> Isometry:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = il.identity(self.lattice.rank)
        m = base.matrix
        while k:
            if k & 1:
                result = il.matmul(result, m)
            m = il.matmul(m, m)
            k >>= 1
        return Isometry(self.lattice, result)

    def is_identity(self) -> bool:
        return self.matrix == il.identity(self.lattice.rank)

    def in_basis(self, basis: BasisTag | str) -> Isometry:
        basis = BasisTag(basis)
        if basis is self.lattice.basis:
            return self
        m = convert_matrix(self.matrix, self.N, self.lattice.basis, basis)
        return Isometry(make_lattice(self.N, basis), m)

    def conjugate(self, alpha: Isometry) -> Isometry:
        """alpha o self o alpha^-1."""
        return alpha @ self @ alpha.inverse()


def identity_isometry(L: Lattice) -> Isometry:
    return Isometry(L, il.identity(L.rank))


def verify_isometry(L: Lattice, M: Sequence[Sequence[int]]) -> Isometry:
    m = il.as_matrix(M)
    n = L.rank
    if len(m) != n or any(len(row) != n for row in m):
        raise LatticeError("bad_shape", f"expected a {n}x{n} matrix for N = {L.N}")
    if il.matmul(il.matmul(il.transpose(m), L.gram), m) != L.gram:
        raise LatticeError("not_isometry", "matrix does not preserve the intersection form")
    return Isometry(L, m)


def reflection(L: Lattice, u: LatticeVector) -> Isometry:
    quu = form_eval(L, u, u)
    if quu not in (1, -1, 2, -2):
        raise LatticeError("bad_reflection_norm", f"reflection needs Q(u,u) in {{+-1, +-2}}, got {quu}")
    gu = il.matvec(L.gram, u.coords)
    cols = []
    for j in range(L.rank):
        k = 2 * gu[j] // quu
        col = [-k * c for c in u.coords]
        col[j] += 1
        cols.append(col)
    return Isometry(L, il.from_columns(cols))


def eichler(L: Lattice, w: LatticeVector, e: LatticeVector) -> Isometry:
    """x -> x + Q(w,x) e - Q(e,x) w - Q(e,e)/2 Q(w,x) w."""
    if not is_isotropic(L, w):
        raise LatticeError("not_isotropic", "Eichler transformation needs a nonzero isotropic w")
    if form_eval(L, w, e) != 0:
        raise LatticeError("not_orthogonal", "Eichler transformation needs Q(w, e) = 0")
    qee = form_eval(L, e, e)
    if qee % 2:
        raise LatticeError("odd_norm", f"Eichler transformation needs Q(e, e) even, got {qee}")
    gw = il.matvec(L.gram, w.coords)
    ge = il.matvec(L.gram, e.coords)
    half = qee // 2
    cols = []
    for j in range(L.rank):
        a, b = gw[j], ge[j]
        col = [a * ec - (b + half * a) * wc for ec, wc in zip(e.coords, w.coords)]
        col[j] += 1
        cols.append(col)
    return Isometry(L, il.from_columns(cols))


# -- finite order -----------------------------------------------------------


def characteristic_polynomial(f: Isometry) -> list[int]:
    """Coefficients of det(x I - M), highest degree first."""
    dm = DomainMatrix([[ZZ(c) for c in row] for row in f.matrix], (f.lattice.rank,) * 2, ZZ)
    return [int(c) for c in dm.charpoly()]


@lru_cache(maxsize=None)
def _cyclotomic_orders(degree: int) -> tuple[int, ...]:
    # totient(d) >= sqrt(d/2), so d <= 2 degree^2 covers every candidate
    return tuple(d for d in range(1, 2 * degree * degree + 3) if totient(d) <= degree)


@lru_cache(maxsize=None)
def _cyclotomic(d: int) -> Poly:
    return Poly(cyclotomic_poly(d, _x), _x, domain=ZZ)


def finite_order(f: Isometry) -> Optional[int]:
    """The order of f if finite, else None.

    f can only have finite order when its characteristic polynomial is a
    product of cyclotomic polynomials; the candidate order is the lcm of
    their indices, and the smallest divisor k of it with f^k = I is
    returned. When no such k exists f is not semisimple and has infinite
    order.
    """
    p = Poly(characteristic_polynomial(f), _x, domain=ZZ)
    n = f.lattice.rank
    orders = []
    for d in _cyclotomic_orders(n):
        phi = _cyclotomic(d)
        while p.degree() >= phi.degree():
            q, r = p.div(phi)
            if not r.is_zero:
                break
            p = q
            orders.append(d)
    if p.degree() != 0:
        return None
    big = lcm(*orders) if orders else 1
    for k in divisors(big):
        if (f ** int(k)).is_identity():
            return int(k)
    return None


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class IsometryClass:
    """Elliptic (finite order), parabolic or hyperbolic.

    ``order`` is set only for elliptic elements and ``fixed_class`` only
    for parabolic ones.
    """

    kind: str
    on_hyperboloid: bool
    order: Optional[int] = None
    fixed_class: Optional[LatticeVector] = None

    @property
    def is_elliptic(self) -> bool:
        return self.kind == "elliptic"

    @property
    def is_parabolic(self) -> bool:
        return self.kind == "parabolic"

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind == "hyperbolic"


def on_hyperboloid(f: Isometry) -> bool:
    """True iff f maps the upper sheet to itself (f(H) has positive H-coordinate)."""
    m = f.in_basis(BasisTag.HE).matrix
    return m[0][0] > 0


def fixed_sublattice(f: Isometry) -> list[tuple[int, ...]]:
    return integer_kernel(il.matsub(f.matrix, il.identity(f.lattice.rank)), f.lattice.rank)


def classify(f: Isometry) -> IsometryClass:
    hyp = on_hyperboloid(f)
    order = finite_order(f)
    if order is not None:
        return IsometryClass("elliptic", hyp, order=order)
    fixed = fixed_sublattice(f)
    gram = f.lattice.gram
    gf = tuple(tuple(il.bilinear(a, gram, b) for b in fixed) for a in fixed)
    if fixed and il.det(gf) == 0:
        radical = integer_kernel(gf, len(fixed))
        # a degenerate subspace of a (1, N) form has a 1-dimensional radical
        coeffs = radical[0]
        r = [0] * f.lattice.rank
        for c, b in zip(coeffs, fixed):
            for i, x in enumerate(b):
                r[i] += c * x
        w = f.lattice.vector(r)
        g = il.content(w.coords)
        w = f.lattice.vector(c // g for c in w.coords)
        return IsometryClass("parabolic", hyp, fixed_class=sign_normalize(w))
    return IsometryClass("hyperbolic", hyp)


def parabolic_fixed_class(f: Isometry) -> LatticeVector:
    c = classify(f)
    if not c.is_parabolic:
        raise LatticeError("not_parabolic", f"isometry is {c.kind}, not parabolic")
    return c.fixed_class


def check_fixed_class(f: Isometry, w: LatticeVector) -> bool:
    """Fixed class sanity: primitive, isotropic and fixed exactly."""
    return is_primitive(w) and is_isotropic(f.lattice, w) and f(w) == w
