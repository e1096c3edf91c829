import itertools
import random

import pytest

from mcglattice import intlinalg as il
from mcglattice.errors import LatticeError
from mcglattice.checks import random_conjugator
from mcglattice.lattice_core import (
    form_eval,
    make_lattice,
    sublattice,
)
from mcglattice.orbit_reduce import (
    diagonalize_definite,
    enumerate_primitive_isotropic,
    find_norm_minus_one,
    reduce_isotropic,
)


def scramble(L, vectors, rng):
    n = len(vectors)
    u = [list(r) for r in il.identity(n)]
    for _ in range(10):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        k = rng.randint(-3, 3)
        u[i] = [a + k * b for a, b in zip(u[i], u[j])]
    out = []
    for row in u:
        x = L.zero()
        for c, b in zip(row, vectors):
            x = x + c * b
        out.append(x)
    return sublattice(L, out)


def test_find_norm_minus_one_examples():
    L = make_lattice(3, "SVE")
    assert find_norm_minus_one(sublattice(L, [L.e(1)])) in (L.e(1), -L.e(1))
    assert find_norm_minus_one(sublattice(L, [L.e(1), L.e(2)])) == L.e(1)
    with pytest.raises(LatticeError):
        find_norm_minus_one(sublattice(L, [L.e(1) + L.e(2)]))


def test_find_norm_minus_one_on_scrambled_basis():
    rng = random.Random(0)
    L = make_lattice(3, "SVE")
    S = scramble(L, [L.e(1), L.e(2)], rng)
    x = find_norm_minus_one(S)
    assert form_eval(L, x, x) == -1
    # brute force: the minimum of -Q over coefficient box is 1
    best = min(-il.bilinear(c, S.gram, c) for c in itertools.product(range(-10, 11), repeat=2) if any(c))
    assert best == 1


def test_diagonalize_definite():
    rng = random.Random(1)
    L = make_lattice(4, "SVE")
    assert diagonalize_definite(sublattice(L, [])).ortho_basis == ()
    d = diagonalize_definite(sublattice(L, [L.e(1), L.e(2), L.e(3)]))
    assert {x.coords for x in d.ortho_basis} == {L.e(k).coords for k in (1, 2, 3)}
    for _ in range(20):
        S = scramble(L, [L.e(1), L.e(2), L.e(3)], rng)
        d = diagonalize_definite(S)
        assert d.gram() == tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
        # same span: stacking both bases gives rank 3 with unit divisors
        both = S.coords_matrix() + tuple(x.coords for x in d.ortho_basis)
        assert il.elementary_divisors(both) == [1, 1, 1]


def test_reduce_examples():
    L = make_lattice(4, "SVE")
    f = reduce_isotropic(L, L.v())
    assert f(L.v()) == L.v() and f.is_identity()
    f = reduce_isotropic(L, L.s())
    assert f(L.s()) == L.v()
    assert il.matmul(il.matmul(il.transpose(f.matrix), L.gram), f.matrix) == L.gram
    he = make_lattice(2, "HE")
    w = he.vector((1, -1, 0))
    assert reduce_isotropic(he, w)(w) == w


def test_reduce_with_non_isotropic_partner():
    he = make_lattice(4, "HE")
    w = he.v()
    for u in [he.H(), he.H() + he.E(2), he.vector((2, -1, 1, 1, 0))]:
        assert form_eval(he, w, u) == 1
        f = reduce_isotropic(he, w, partner=u)
        assert f(w) == he.v()
    with pytest.raises(LatticeError):
        reduce_isotropic(he, w, partner=he.E(2))


def test_reduce_errors():
    he = make_lattice(3, "HE")
    codes = []
    for L, w in [(make_lattice(9, "HE"), make_lattice(9, "HE").v()), (he, 2 * he.v()), (he, he.H())]:
        with pytest.raises(LatticeError) as exc:
            reduce_isotropic(L, w)
        codes.append(exc.value.code)
    assert codes == ["n_out_of_range", "not_primitive", "not_isotropic"]


def test_reduce_random_conjugates():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(2, 8)
        L = make_lattice(n, rng.choice(["HE", "SVE"]))
        a = random_conjugator(L, rng)
        w = a(L.v())
        f = reduce_isotropic(L, w)
        assert f(w) == L.v()


def test_enumerate_examples():
    assert len(enumerate_primitive_isotropic(make_lattice(1, "HE"), 1)) == 2
    got = [x.coords for x in enumerate_primitive_isotropic(make_lattice(2, "HE"), 1)]
    assert got == [(1, -1, 0), (1, 0, -1), (1, 0, 1), (1, 1, 0)]
    assert enumerate_primitive_isotropic(make_lattice(3, "HE"), 0) == []


def test_enumerate_against_brute_force():
    for n in (2, 3):
        L = make_lattice(n, "HE")
        got = {x.coords for x in enumerate_primitive_isotropic(L, 3)}
        brute = set()
        for x in itertools.product(range(-3, 4), repeat=n + 1):
            if any(x) and il.content(x) == 1 and il.bilinear(x, L.gram, x) == 0:
                first = next(c for c in x if c)
                if first > 0:
                    brute.add(x)
        assert got == brute
