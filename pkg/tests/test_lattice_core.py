import random

import pytest

from mcglattice import intlinalg as il
from mcglattice.errors import LatticeError
from mcglattice.lattice_core import (
    BasisTag,
    change_basis,
    find_dual_partner,
    form_eval,
    integer_kernel,
    is_isotropic,
    is_primitive,
    make_lattice,
    orthogonal_complement,
)


def he_gram_conjugated(n):
    # independent of gram_matrix: build P^T diag(1,-1,...) P by hand
    p = [[0] * (n + 1) for _ in range(n + 1)]
    cols = {0: {0: 1, 2: -1}, 1: {0: 1, 1: -1}, 2: {0: 1, 1: -1, 2: -1}}
    for k in range(2, n):
        cols[k + 1] = {k + 1: 1}
    for j, col in cols.items():
        for i, x in col.items():
            p[i][j] = x
    d = [1] + [-1] * n
    return tuple(tuple(sum(p[k][i] * d[k] * p[k][j] for k in range(n + 1)) for j in range(n + 1))
                 for i in range(n + 1))


def test_make_lattice_examples():
    assert make_lattice(2, BasisTag.HE).gram == ((1, 0, 0), (0, -1, 0), (0, 0, -1))
    assert make_lattice(2, BasisTag.SVE).gram == ((0, 1, 0), (1, 0, 0), (0, 0, -1))
    with pytest.raises(LatticeError):
        make_lattice(1, BasisTag.SVE)
    with pytest.raises(LatticeError):
        make_lattice(0, BasisTag.HE)


@pytest.mark.parametrize("n", range(2, 10))
def test_sve_gram_by_conjugation(n):
    L = make_lattice(n, BasisTag.SVE)
    assert L.gram == he_gram_conjugated(n)
    assert abs(il.det(L.gram)) == 1


def test_change_basis_examples():
    sve = make_lattice(4, BasisTag.SVE)
    assert change_basis(sve.v(), BasisTag.HE).coords == (1, -1, 0, 0, 0)
    assert change_basis(make_lattice(2, "SVE").e(1), "HE").coords == (1, -1, -1)
    assert change_basis(sve.zero(), "HE").is_zero()
    assert change_basis(sve.e(3), "HE").coords == (0, 0, 0, 0, 1)


def test_form_eval_examples():
    he = make_lattice(2, "HE")
    assert form_eval(he, he.H(), he.H()) == 1
    s2 = make_lattice(2, "SVE")
    assert form_eval(s2, s2.s(), s2.v()) == 1
    s3 = make_lattice(3, "SVE")
    assert form_eval(s3, s3.v(), s3.e(2)) == 0
    with pytest.raises(LatticeError):
        form_eval(he, he.H(), s2.v())


def test_form_and_round_trip_random():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(2, 9)
        he = make_lattice(n, "HE")
        x = he.vector(rng.randint(-9, 9) for _ in range(n + 1))
        y = he.vector(rng.randint(-9, 9) for _ in range(n + 1))
        xs, ys = change_basis(x, "SVE"), change_basis(y, "SVE")
        assert change_basis(xs, "HE") == x
        assert form_eval(he, x, y) == form_eval(make_lattice(n, "SVE"), xs, ys)


def test_primitive_and_isotropic():
    L = make_lattice(3, "SVE")
    assert is_primitive(L.v())
    assert not is_primitive(2 * L.v())
    assert is_primitive(make_lattice(2, "HE").vector((2, 3, 0)))
    with pytest.raises(LatticeError):
        is_primitive(L.zero())
    he = make_lattice(2, "HE")
    assert is_isotropic(L, L.v())
    assert not is_isotropic(he, he.H())
    assert not is_isotropic(he, he.zero())


def test_integer_kernel_examples():
    assert integer_kernel(il.identity(3), 3) == []
    assert len(integer_kernel(((0, 0, 0),) * 3, 3)) == 3
    g = ((1, 0, 0), (2, 1, 2), (2, 0, 1))  # E(v, 2e_1), SVE, N=2
    assert integer_kernel(il.matsub(g, il.identity(3)), 3) == [(0, 1, 0)]


def test_orthogonal_complement_examples():
    s2 = make_lattice(2, "SVE")
    c = orthogonal_complement(s2, [s2.v(), s2.s()])
    assert [abs(x) for x in c.basis_vectors[0].coords] == [0, 0, 1] and c.gram == ((-1,),)
    he1 = make_lattice(1, "HE")
    c = orthogonal_complement(he1, [he1.H()])
    assert c.gram == ((-1,),)
    s3 = make_lattice(3, "SVE")
    c = orthogonal_complement(s3, [s3.v()])
    assert c.rank == 3
    assert all(form_eval(s3, b, s3.v()) == 0 for b in c.basis_vectors)
    with pytest.raises(LatticeError):
        orthogonal_complement(s3, [s3.v(), 2 * s3.v()])


def test_complement_of_hyperbolic_pair_is_negative_definite_and_saturated():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(2, 7)
        he = make_lattice(n, "HE")
        x = he.vector(rng.randint(-5, 5) for _ in range(n + 1))
        if x.is_zero() or not is_primitive(x):
            continue
        u = find_dual_partner(he, x)
        if il.row_rank([x.coords, u.coords]) < 2:
            continue
        c = orthogonal_complement(he, [x, u])
        assert il.elementary_divisors(c.coords_matrix()) == [1] * c.rank
        if is_isotropic(he, x):
            assert c.rank == n - 1
            g = c.gram
            for k in range(1, c.rank + 1):
                minor = il.det(tuple(r[:k] for r in g[:k]))
                assert (minor > 0) == (k % 2 == 0)


def test_dual_partner_examples():
    L = make_lattice(5, "SVE")
    assert find_dual_partner(L, L.v()) == L.s()
    he = make_lattice(2, "HE")
    w = he.vector((1, -1, 0))
    assert form_eval(he, w, find_dual_partner(he, w)) == 1
    with pytest.raises(LatticeError):
        find_dual_partner(L, 2 * L.v())


def test_dual_partner_sweep():
    rng = random.Random(2)
    for _ in range(300):
        n = rng.randint(1, 9)
        basis = rng.choice(["HE", "SVE"]) if n >= 2 else "HE"
        L = make_lattice(n, basis)
        w = L.vector(rng.randint(-10, 10) for _ in range(n + 1))
        if w.is_zero() or not is_primitive(w):
            continue
        u = find_dual_partner(L, w)
        assert form_eval(L, w, u) == 1
        assert find_dual_partner(L, w) == u
