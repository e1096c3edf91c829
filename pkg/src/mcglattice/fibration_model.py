"""The de Jonquieres model: PGL_2 identities, homology actions and recipes.

Symbols for the named diffeomorphisms of the conic bundle over CP^1:

    gamma_k  local de Jonquieres map over B_k        [gamma_k] = Ref_{v-e_k-e_{k+1}} Ref_{e_k-e_{k+1}}
    r_k      conjugation near e_k, inside V_k        [r_k] = Ref_{e_k}
    s_k      transposition of z_k, z_{k+1} over B_k  [s_k] = Ref_{e_k-e_{k+1}}
    phi_k    r_k r_{k+1} gamma_k                     [phi_k] = E(v, e_k + e_{k+1})
    psi      cut-off square of phi_1 over V_1        [psi] = E(v, 2 e_1)

Only homology actions and support bookkeeping are modelled; the smooth
maps themselves are not.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import LatticeError
from .isometries import Isometry, identity_isometry, reflection
from .laurent import LaurentMat2, LaurentScalar
from .lattice_core import BasisTag, LatticeVector, change_basis, make_lattice
from .stabilizers import (
    extend_from_e_images,
    in_stab,
    stab_decompose,
)

LAM = LaurentScalar.var("lam")
MU = LaurentScalar.var("mu")
NU = LaurentScalar.var("nu")
SWAP = LaurentMat2.of([[0, 1], [1, 0]])


# -- PGL_2 identities ---------------------------------------------------------


def m_lambda(sign: int = 1) -> tuple[LaurentMat2, LaurentMat2]:
    """(M_lam, its inverse up to scalar) with lam replaced by sign * lam."""
    lam = LAM if sign > 0 else -LAM
    inv = lam.unit_inverse()
    m = LaurentMat2.of([[1, 1], [-lam, lam]])
    m_inv = LaurentMat2.of([[1, -inv], [1, inv]])
    return m, m_inv


def diag(x, y) -> LaurentMat2:
    return LaurentMat2.of([[x, 0], [0, y]])


def proj_eq(A: LaurentMat2, B: LaurentMat2) -> bool:
    """A = c B for a nonzero scalar c: every 2x2 cross product vanishes."""
    if A.is_zero() or B.is_zero():
        raise LatticeError("zero_matrix", "projective equality needs nonzero matrices")
    xs, ys = A.entries(), B.entries()
    return all((xs[i] * ys[j] - xs[j] * ys[i]).is_zero() for i in range(4) for j in range(i + 1, 4))


def proj_commute(A: LaurentMat2, B: LaurentMat2) -> bool:
    return proj_eq(A @ B, B @ A)


def conjugate_by_m(D: LaurentMat2, sign: int = 1) -> LaurentMat2:
    m, m_inv = m_lambda(sign)
    return m @ D @ m_inv


def verify_boundary_identity() -> bool:
    """M diag(-1, 1) M^-1 = [[0, 1], [lam^2, 0]] in PGL_2."""
    return proj_eq(conjugate_by_m(diag(-1, 1)), LaurentMat2.of([[0, 1], [LAM * LAM, 0]]))


@dataclass(frozen=True)
class CommutationReport:
    same_sign: bool
    opposite_sign: bool
    against_dj: bool

    def all(self) -> bool:
        return self.same_sign and self.opposite_sign and self.against_dj


def verify_commutation_cases() -> CommutationReport:
    """The three cases for commuting neighbouring gamma_i, gamma_{i+1}.

    (i)   lam_i = lam_{i+1}: conjugates of diag(mu, 1) and diag(nu, 1) by one M commute.
    (ii)  lam_i = -lam_{i+1}: M_{-lam} = M_lam swap, and the diag(nu, 1)
          conjugate by M_{-lam} is the diag(1, nu) conjugate by M_lam, which
          commutes with the diag(mu, 1) conjugate.
    (iii) against dJ: the diag(mu, 1) and diag(-1, 1) conjugates commute.
    """
    m, m_inv = m_lambda(1)
    mm, mm_inv = m_lambda(-1)
    a = conjugate_by_m(diag(MU, 1))
    same = proj_commute(a, conjugate_by_m(diag(NU, 1)))
    swapped = conjugate_by_m(diag(1, NU))
    opposite = (
        proj_eq(m, mm @ SWAP)
        and proj_eq(m_inv, SWAP @ mm_inv)
        and proj_eq(conjugate_by_m(diag(NU, 1), -1), swapped)
        and proj_commute(a, swapped)
    )
    dj = proj_commute(a, conjugate_by_m(diag(-1, 1)))
    return CommutationReport(same, opposite, dj)


def identity_reports() -> list[dict]:
    rep = verify_commutation_cases()
    return [
        {"identity": "boundary_conjugation", "holds": verify_boundary_identity()},
        {"identity": "commute_same_sign", "holds": rep.same_sign},
        {"identity": "commute_opposite_sign", "holds": rep.opposite_sign},
        {"identity": "commute_with_dj", "holds": rep.against_dj},
    ]


# -- words and homology actions -----------------------------------------------

SYMBOLS = ("gamma", "r", "s", "phi", "psi")


@dataclass(frozen=True)
class Letter:
    sym: str
    k: int = 1
    power: int = 1

    def support(self) -> frozenset[str]:
        """The region the diffeomorphism is supported over."""
        if self.sym == "r":
            return frozenset({f"V{self.k}"})
        if self.sym == "psi":
            return frozenset({"V1"})
        return frozenset({f"B{self.k}"})

    def fiber_breaking(self) -> frozenset[str]:
        """Where the letter may fail to act fiberwise.

        gamma_k preserves the fibration; phi_k = r_k r_{k+1} gamma_k only
        breaks it inside V_k and V_{k+1}; s_k moves critical points inside B_k.
        """
        if self.sym == "gamma":
            return frozenset()
        if self.sym == "phi":
            return frozenset({f"V{self.k}", f"V{self.k + 1}"})
        return self.support()


@dataclass(frozen=True)
class DiffeoWord:
    """A composition of named diffeomorphisms, leftmost letter applied last."""

    N: int
    letters: tuple[Letter, ...] = ()
    support: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        if self.N < 2:
            raise LatticeError("n_out_of_range", "words need N >= 2")
        n = self.N - 1
        for x in self.letters:
            if x.sym not in SYMBOLS:
                raise LatticeError("bad_letter", f"unknown symbol {x.sym!r}")
            top = {"gamma": n - 1, "phi": n - 1, "s": n - 1, "r": n, "psi": 1}[x.sym]
            if not 1 <= x.k <= top:
                raise LatticeError("index_out_of_range", f"{x.sym}_{x.k} is out of range for n = {n}")
        labels = frozenset().union(*(x.support() for x in self.letters))
        object.__setattr__(self, "support", labels)

    @property
    def fiber_breaking(self) -> frozenset[str]:
        return frozenset().union(*(x.fiber_breaking() for x in self.letters))

    def __len__(self) -> int:
        return len(self.letters)


def word(N: int, letters: Iterable[Sequence]) -> DiffeoWord:
    """Build from (sym, k) or (sym, k, power) tuples."""
    return DiffeoWord(N, tuple(Letter(*x) for x in letters))


@lru_cache(maxsize=None)
def letter_action(N: int, sym: str, k: int) -> Isometry:
    L = make_lattice(N, BasisTag.SVE)
    v, e = L.v(), L.e
    ref = lambda x: reflection(L, x)  # noqa: E731
    if sym == "gamma":
        return ref(v - e(k) - e(k + 1)) @ ref(e(k) - e(k + 1))
    if sym == "r":
        return ref(e(k))
    if sym == "s":
        return ref(e(k) - e(k + 1))
    if sym == "phi":
        return ref(e(k)) @ ref(e(k + 1)) @ letter_action(N, "gamma", k)
    if sym == "psi":
        return ref(e(1)) @ ref(v - e(1))
    raise LatticeError("bad_letter", f"unknown symbol {sym!r}")


def homology_action(w: DiffeoWord) -> Isometry:
    """Product of the letter actions in written order, SVE basis."""
    out = identity_isometry(make_lattice(w.N, BasisTag.SVE))
    for x in w.letters:
        out = out @ letter_action(w.N, x.sym, x.k) ** x.power
    return out


def gamma_fiber_action(N: int, k: int) -> Isometry:
    """[gamma_k] from the de Jonquieres bookkeeping alone.

    dJ swaps e_j with v - e_j over B_k (j = k, k+1) and fixes v and the
    other e_j; Stab(v) elements are determined by their action on the e_j.
    """
    L = make_lattice(N, BasisTag.SVE)
    images = [L.v() - L.e(j) if j in (k, k + 1) else L.e(j) for j in range(1, N)]
    return extend_from_e_images(N, images)


# -- realization ---------------------------------------------------------------


def realize(h: Isometry) -> DiffeoWord:
    """A recipe psi^a phi_1^b ... r... s... whose homology action is h."""
    dec = stab_decompose(h)
    N = dec.h.N
    m = dec.lambda_.generator_word
    letters = []
    if m and m[0]:
        letters.append(Letter("psi", 1, m[0]))
    letters += [Letter("phi", k, p) for k, p in enumerate(m[1:], start=1) if p]
    letters += [Letter(sym, k) for sym, k in dec.sigma.reflection_word]
    out = DiffeoWord(N, tuple(letters))
    if homology_action(out) != dec.h:
        raise AssertionError("recipe does not realize h")
    allowed = {f"V{i}" for i in range(1, N)} | {f"B{x.k}" for x in letters if x.sym == "s"}
    if not out.fiber_breaking <= allowed:
        raise AssertionError("recipe breaks the fibration outside the allowed regions")
    return out


def realize_general(h: Isometry, w: LatticeVector) -> tuple[Isometry, DiffeoWord]:
    """(alpha, word) with alpha(w) = v and alpha^-1 [word] alpha = h.

    alpha is only a homology class; a diffeomorphism realizing it exists
    but is not constructed here.
    """
    from .orbit_reduce import reduce_isotropic

    L = h.lattice
    w = change_basis(w, L.basis)
    if not in_stab(h, w):
        raise LatticeError("not_in_stab", "isometry does not fix w")
    alpha = reduce_isotropic(L, w)
    rec = realize(h.conjugate(alpha))
    a = alpha.in_basis(BasisTag.SVE)
    back = a.inverse() @ homology_action(rec) @ a
    if back.in_basis(L.basis) != h:
        raise AssertionError("conjugated recipe does not realize h")
    return alpha, rec


def word_action_in(w: DiffeoWord, basis: BasisTag | str, alpha: Optional[Isometry] = None) -> Isometry:
    """homology_action, optionally conjugated back by alpha, in the given basis."""
    act = homology_action(w)
    if alpha is not None:
        a = alpha.in_basis(BasisTag.SVE)
        act = a.inverse() @ act @ a
    return act.in_basis(basis)
