"""Stab(w) and its abelian normal subgroup Lambda_w.

For w = v everything is computed in the SVE basis, where the quotient
v^perp / Z{v} is represented by the lift Z{e_1, ..., e_n} (n = N - 1) and
Stab(v) splits as Lambda_v (Eichler transformations E(v, c), c even)
extended by signed permutations of the e_k.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from . import intlinalg as il
from .errors import LatticeError
from .isometries import Isometry, eichler, identity_isometry, reflection
from .lattice_core import (
    BasisTag,
    Lattice,
    LatticeVector,
    change_basis,
    find_dual_partner,
    form_eval,
    is_isotropic,
    make_lattice,
    orthogonal_complement,
)


def _sve_lattice(N: int) -> Lattice:
    if N < 2:
        raise LatticeError("n_out_of_range", f"Stab(v) needs N >= 2, got N = {N}")
    return make_lattice(N, BasisTag.SVE)


def _in_lattice(x: LatticeVector, L: Lattice) -> LatticeVector:
    if x.N != L.N:
        raise LatticeError("basis_mismatch", "vector and isometry have different N")
    return change_basis(x, L.basis)


# -- membership ---------------------------------------------------------------


def in_stab(f: Isometry, w: LatticeVector) -> bool:
    return f(_in_lattice(w, f.lattice)) == _in_lattice(w, f.lattice)


def _lift_basis(L: Lattice, w: LatticeVector) -> tuple[LatticeVector, list[LatticeVector]]:
    """A dual partner u of w and a basis of Z{w, u}^perp, the lift of w^perp / Z{w}."""
    if not is_isotropic(L, w):
        raise LatticeError("not_isotropic", "w must be a nonzero isotropic class")
    if L.N >= 2 and w == L.v():
        return L.s(), [L.e(k) for k in range(1, L.N)]
    u = find_dual_partner(L, w)
    return u, list(orthogonal_complement(L, [w, u]).basis_vectors)


def _shift_along(L: Lattice, d: LatticeVector, w: LatticeVector, u: LatticeVector) -> Optional[int]:
    """t with d = t w, or None."""
    t = form_eval(L, d, u)
    return t if d == t * w else None


def in_lambda(f: Isometry, w: LatticeVector) -> bool:
    L = f.lattice
    w = _in_lattice(w, L)
    if not in_stab(f, w):
        raise LatticeError("not_in_stab", "isometry does not fix w")
    u, lift = _lift_basis(L, w)
    return all(_shift_along(L, f(b) - b, w, u) is not None for b in lift)


# -- Lambda coordinates -------------------------------------------------------


@dataclass(frozen=True)
class LambdaCoordinate:
    """c(f) for f in Lambda_w.

    ``even_vector`` holds coordinates in the e-basis of the quotient and
    ``generator_word`` the exponents over (2e_1, e_1+e_2, ..., e_{n-1}+e_n).
    ``lift`` is the same class as an element of w^perp, so that
    eichler(w, lift) recovers f.
    """

    w: LatticeVector
    even_vector: tuple[int, ...]
    generator_word: tuple[int, ...]
    lift: LatticeVector


def generator_word_from_even(c: Sequence[int]) -> tuple[int, ...]:
    """Solve c = m_g (2e_1) + sum m_k (e_k + e_{k+1}) by back substitution."""
    n = len(c)
    if n == 0:
        return ()
    if sum(c) % 2:
        raise LatticeError("odd_vector", f"{tuple(c)} has odd norm, so it is not in A")
    m = [0] * n  # m[0] = m_g, m[k] = m_{f_k}
    if n > 1:
        m[n - 1] = c[n - 1]
        for j in range(n - 2, 0, -1):
            m[j] = c[j] - m[j + 1]
        m[0] = (c[0] - m[1]) // 2
    else:
        m[0] = c[0] // 2
    return tuple(m)


def even_from_generator_word(m: Sequence[int]) -> tuple[int, ...]:
    n = len(m)
    c = [0] * n
    if n:
        c[0] += 2 * m[0]
    for k in range(1, n):
        c[k - 1] += m[k]
        c[k] += m[k]
    return tuple(c)


def _lambda_coordinate_v(f: Isometry) -> tuple[int, ...]:
    # f(e_k) = e_k - Qbar(c, e_k) v = e_k + c_k v in the SVE basis
    L = f.lattice
    return tuple(f.matrix[1][k + 1] for k in range(1, L.N))


def lambda_coordinate(f: Isometry, w: LatticeVector) -> LambdaCoordinate:
    """c(f) for f in Lambda_w; for w != v the e-basis is transported by reduce_isotropic."""
    L = f.lattice
    w = _in_lattice(w, L)
    if not in_lambda(f, w):
        raise LatticeError("not_in_lambda", "isometry acts nontrivially on w^perp / Z{w}")
    sve = _sve_lattice(L.N)
    if change_basis(w, BasisTag.SVE) == sve.v():
        fs = f.in_basis(BasisTag.SVE)
        c = _lambda_coordinate_v(fs)
        lift = change_basis(sve.vector((0, 0) + c), L.basis)
    else:
        from .orbit_reduce import reduce_isotropic

        alpha = reduce_isotropic(L, w).in_basis(BasisTag.SVE)
        fs = f.in_basis(BasisTag.SVE).conjugate(alpha)
        c = _lambda_coordinate_v(fs)
        lift = change_basis(alpha.inverse()(sve.vector((0, 0) + c)), L.basis)
    if sum(x * x for x in c) % 2:
        raise AssertionError("c(f) has odd norm")
    coord = LambdaCoordinate(w, c, generator_word_from_even(c), lift)
    if eichler(L, w, lift) != f:
        raise AssertionError("E(w, c(f)) does not recover f")
    return coord


@lru_cache(maxsize=None)
def _lambda_generators(N: int) -> tuple[Isometry, ...]:
    L = _sve_lattice(N)
    v, e = L.v(), L.e
    ref = lambda x: reflection(L, x)  # noqa: E731
    out = [ref(e(1)) @ ref(v - e(1))]
    for k in range(1, N - 1):
        out.append(ref(e(k)) @ ref(e(k + 1)) @ ref(v - e(k) - e(k + 1)) @ ref(e(k) - e(k + 1)))
    return tuple(out)


def lambda_generators(N: int) -> list[Isometry]:
    """[g, f_1, ..., f_{N-2}] as the reflection products, in the SVE basis."""
    return list(_lambda_generators(N))


def eichler_generators(N: int) -> list[Isometry]:
    """[E(v, 2e_1), E(v, e_1+e_2), ...]: the same list built from the Eichler formula."""
    L = _sve_lattice(N)
    out = [eichler(L, L.v(), 2 * L.e(1))]
    out += [eichler(L, L.v(), L.e(k) + L.e(k + 1)) for k in range(1, N - 1)]
    return out


# -- signed permutations --------------------------------------------------------


@dataclass(frozen=True)
class SignedPermutation:
    """sigma(e_i) = signs[i-1] * e_{perm[i-1]}, indices 1-based."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise LatticeError("bad_permutation", f"{self.perm} is not a permutation of 1..{n}")
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise LatticeError("bad_signs", "signs must be +-1, one per index")

    @property
    def n(self) -> int:
        return len(self.perm)

    @cached_property
    def reflection_word(self) -> tuple[tuple[str, int], ...]:
        return signed_perm_decompose(self)

    def matrix(self) -> il.Matrix:
        """n x n matrix on the e-basis (column convention)."""
        cols = []
        for p, s in zip(self.perm, self.signs):
            col = [0] * self.n
            col[p - 1] = s
            cols.append(col)
        return il.from_columns(cols)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(1, n + 1)), (1,) * n)


def letter_name(letter: tuple[str, int]) -> str:
    sym, k = letter
    return f"Re{k}" if sym == "r" else f"Re{k}-e{k + 1}"


def parse_letter(name: str) -> tuple[str, int]:
    body = name[2:] if name.startswith("Re") else ""
    try:
        if "-" in body:
            a, b = body.split("-e")
            if int(b) != int(a) + 1:
                raise ValueError
            return ("s", int(a))
        return ("r", int(body))
    except ValueError:
        raise LatticeError("bad_letter", f"cannot parse reflection letter {name!r}") from None


def signed_perm_decompose(sigma: SignedPermutation) -> tuple[tuple[str, int], ...]:
    """Flips first, then adjacent transpositions from a bubble sort.

    The word is read as a composition, left factor outermost, so the flips
    act after the permutation: sigma = r o s.
    """
    flips = sorted(p for p, s in zip(sigma.perm, sigma.signs) if s < 0)
    arr = list(sigma.perm)
    swaps = []
    for end in range(len(arr) - 1, 0, -1):
        for j in range(end):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j + 1)
    return tuple(("r", k) for k in flips) + tuple(("s", k) for k in reversed(swaps))


def reflection_word_matrix(n: int, word: Sequence[tuple[str, int]]) -> il.Matrix:
    """Evaluate a reflection word on the e-basis (n x n)."""
    m = il.identity(n)
    for sym, k in word:
        if not 1 <= k <= (n if sym == "r" else n - 1):
            raise LatticeError("index_out_of_range", f"letter {sym}{k} out of range for n = {n}")
        cols = [list(c) for c in il.columns(il.identity(n))]
        if sym == "r":
            cols[k - 1][k - 1] = -1
        else:
            cols[k - 1], cols[k] = cols[k], cols[k - 1]
        m = il.matmul(m, il.from_columns(cols))
    return m


def section_lift(sigma: SignedPermutation, w: Optional[LatticeVector] = None,
                 u: Optional[LatticeVector] = None) -> Isometry:
    """Id on Z{u, w} and sigma on Z{u, w}^perp.

    With w, u omitted this is the split for (v, s), returned in the SVE
    basis. For another pair, sigma acts on the orthonormal basis of the
    complement produced by diagonalize_definite, and the result uses w's
    basis.
    """
    N = sigma.n + 1
    sve = _sve_lattice(N)
    if w is None and u is None:
        block = [[int(i == j) for j in range(N + 1)] for i in range(N + 1)]
        for i, row in enumerate(sigma.matrix()):
            block[i + 2][2:] = row
        return Isometry(sve, il.as_matrix(block))
    if w is None or u is None or w.N != N or u.N != N:
        raise LatticeError("bad_pair", "section_lift needs both w and u for the same N as sigma")
    L = make_lattice(N, w.basis)
    u = change_basis(u, L.basis)
    if not is_isotropic(L, w) or form_eval(L, w, u) != 1:
        raise LatticeError("bad_pair", "need w isotropic and Q(w, u) = 1")
    from .orbit_reduce import diagonalize_definite

    d = diagonalize_definite(orthogonal_complement(L, [w, u])).ortho_basis
    frame = il.from_columns([u.coords, w.coords] + [x.coords for x in d])
    inner = section_lift(sigma).matrix
    return Isometry(L, il.matmul(il.matmul(frame, inner), il.unimodular_inverse(frame)))


# -- decomposition of Stab(v) ---------------------------------------------------


@dataclass(frozen=True)
class StabDecomposition:
    """h = f o section_lift(sigma) with f = E(v, lambda_.lift) in Lambda_v."""

    h: Isometry
    lambda_: LambdaCoordinate
    sigma: SignedPermutation
    f: Isometry
    section: Isometry

    def recompose(self) -> Isometry:
        return self.f @ self.section


def quotient_image(h: Isometry) -> SignedPermutation:
    """The action of h in Stab(v) on v^perp / Z{v}, read off the lift Z{e_k}."""
    hs = h.in_basis(BasisTag.SVE)
    n = hs.N - 1
    perm, signs = [], []
    for i in range(n):
        col = [row[i + 2] for row in hs.matrix]
        tail = col[2:]
        hits = [j for j, x in enumerate(tail) if x]
        if col[0] != 0 or len(hits) != 1 or abs(tail[hits[0]]) != 1:
            raise AssertionError("quotient action is not a signed permutation")
        perm.append(hits[0] + 1)
        signs.append(tail[hits[0]])
    return SignedPermutation(tuple(perm), tuple(signs))


def stab_decompose(h: Isometry) -> StabDecomposition:
    hs = h.in_basis(BasisTag.SVE)
    L = hs.lattice
    if not in_stab(hs, L.v()):
        raise LatticeError("not_in_stab", "isometry does not fix v")
    sigma = quotient_image(hs)
    sec = section_lift(sigma)
    f = hs @ sec.inverse()
    if not in_lambda(f, L.v()):
        raise AssertionError("h o l(sigma)^-1 is not in Lambda_v")
    coord = lambda_coordinate(f, L.v())
    dec = StabDecomposition(hs, coord, sigma, f, sec)
    if dec.recompose() != hs:
        raise AssertionError("decomposition does not recompose to h")
    return dec


def extend_from_e_images(N: int, images: Sequence[LatticeVector]) -> Isometry:
    """The unique h in Stab(v) with h(e_k) = images[k-1].

    h(s) = s + a v + sum b_i e_i is forced by Q(h(s), h(e_j)) = 0 and
    Q(h(s), h(s)) = 0; raises if no integral isometry exists.
    """
    L = _sve_lattice(N)
    ys = [change_basis(y, BasisTag.SVE) for y in images]
    n = N - 1
    if len(ys) != n:
        raise LatticeError("bad_shape", f"need {n} images, got {len(ys)}")
    if any(form_eval(L, y, L.v()) for y in ys):
        raise LatticeError("not_extendable", "images must lie in v^perp")
    a_mat = tuple(tuple(form_eval(L, L.e(i + 1), y) for i in range(n)) for y in ys)
    rhs = [-form_eval(L, L.s(), y) for y in ys]
    if il.det(a_mat) == 0:
        raise LatticeError("not_extendable", "images do not span the quotient")
    b = il.solve_rational(a_mat, rhs)
    a = Fraction(sum(x * x for x in b), 2)
    if any(x.denominator != 1 for x in b) or a.denominator != 1:
        raise LatticeError("not_extendable", "no integral extension exists")
    hs = (1, int(a)) + tuple(int(x) for x in b)
    m = il.from_columns([hs, L.v().coords] + [y.coords for y in ys])
    if il.matmul(il.matmul(il.transpose(m), L.gram), m) != L.gram:
        raise LatticeError("not_extendable", "images do not preserve the form")
    return Isometry(L, m)


# -- random elements --------------------------------------------------------------


def stab_letters(N: int) -> list[tuple[str, Isometry]]:
    """Named generators g, f_k, Ref_{e_k}, Ref_{e_k - e_{k+1}} of Stab(v), SVE basis."""
    L = _sve_lattice(N)
    gens = lambda_generators(N)
    out = [("g", gens[0])] + [(f"f{k}", gens[k]) for k in range(1, N - 1)]
    out += [(f"Re{k}", reflection(L, L.e(k))) for k in range(1, N)]
    out += [(f"Re{k}-e{k + 1}", reflection(L, L.e(k) - L.e(k + 1))) for k in range(1, N - 1)]
    return out


def random_stab_element(N: int, rng: random.Random, max_len: int = 20) -> tuple[list[str], Isometry]:
    letters = stab_letters(N)
    names, h = [], identity_isometry(_sve_lattice(N))
    for _ in range(rng.randint(0, max_len)):
        name, m = rng.choice(letters)
        names.append(name)
        h = h @ m
    return names, h
