import random

import pytest
from sympy import Matrix, symbols

from mcglattice import intlinalg as il
from mcglattice.checks import brute_force_order
from mcglattice.errors import LatticeError
from mcglattice.isometries import (
    Isometry,
    characteristic_polynomial,
    check_fixed_class,
    classify,
    eichler,
    finite_order,
    identity_isometry,
    parabolic_fixed_class,
    reflection,
    verify_isometry,
)
from mcglattice.lattice_core import form_eval, make_lattice, sign_normalize


def sve(n):
    return make_lattice(n, "SVE")


def random_reflection_word(L, rng, length):
    he = make_lattice(L.N, "HE")
    roots = [he.E(i) for i in range(1, L.N + 1)]
    roots += [he.E(i) - he.E(i + 1) for i in range(1, L.N)]
    roots.append(he.H() - he.E(1) - he.E(2) - (he.E(3) if L.N >= 3 else he.zero()))
    f = identity_isometry(he)
    for _ in range(length):
        f = f @ reflection(he, rng.choice(roots))
    return f


def test_verify_isometry_examples():
    he = make_lattice(3, "HE")
    verify_isometry(he, il.identity(4))
    verify_isometry(he, he.gram)
    bad = [list(r) for r in il.identity(4)]
    bad[0][1] = 1
    with pytest.raises(LatticeError) as exc:
        verify_isometry(he, bad)
    assert exc.value.code == "not_isometry"
    with pytest.raises(LatticeError):
        verify_isometry(he, il.identity(3))


def test_reflection_examples():
    L = sve(2)
    r = reflection(L, L.e(1))
    assert r(L.e(1)) == -L.e(1)
    assert r(L.v()) == L.v()
    assert reflection(L, L.v() - L.e(1))(L.e(1)) == 2 * L.v() - L.e(1)
    with pytest.raises(LatticeError):
        reflection(L, 2 * L.e(1))


def test_reflection_properties():
    rng = random.Random(0)
    for _ in range(200):
        n = rng.randint(1, 7)
        L = make_lattice(n, "HE")
        u = L.vector(rng.randint(-3, 3) for _ in range(n + 1))
        if form_eval(L, u, u) not in (1, -1, 2, -2):
            continue
        r = reflection(L, u)
        assert (r @ r).is_identity()
        assert r(u) == -u
        verify_isometry(L, r.matrix)


def test_eichler_examples():
    L = sve(2)
    assert eichler(L, L.v(), L.zero()).is_identity()
    g = eichler(L, L.v(), 2 * L.e(1))
    assert il.columns(g.matrix) == [(1, 2, 2), (0, 1, 0), (0, 2, 1)]
    assert g(L.e(1)) == L.e(1) + 2 * L.v()
    L3 = sve(3)
    assert eichler(L3, L3.v(), L3.e(1) + L3.e(2))(L3.e(1)) == L3.e(1) + L3.v()


def test_eichler_errors():
    L = sve(3)
    codes = []
    for w, e in [(L.e(1), L.e(2)), (L.v(), L.s()), (L.v(), L.e(1))]:
        with pytest.raises(LatticeError) as exc:
            eichler(L, w, e)
        codes.append(exc.value.code)
    assert codes == ["not_isotropic", "not_orthogonal", "odd_norm"]


def test_eichler_is_a_homomorphism_on_even_vectors():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(2, 6)
        L = sve(n)

        def even():
            c = [rng.randint(-5, 5) for _ in range(n - 1)]
            if sum(c) % 2:
                c[0] += 1
            return L.vector([0, rng.randint(-5, 5)] + c)

        a, b = even(), even()
        ea, eb = eichler(L, L.v(), a), eichler(L, L.v(), b)
        assert ea @ eb == eichler(L, L.v(), a + b)
        verify_isometry(L, ea.matrix)


def test_characteristic_polynomial_matches_sympy():
    rng = random.Random(2)
    x = symbols("x")
    for _ in range(20):
        f = random_reflection_word(make_lattice(rng.randint(2, 5), "HE"), rng, 6)
        expected = [int(c) for c in Matrix(f.matrix).charpoly(x).all_coeffs()]
        assert characteristic_polynomial(f) == expected


def test_finite_order_examples():
    L = sve(2)
    assert finite_order(identity_isometry(L)) == 1
    assert finite_order(reflection(L, L.e(1))) == 2
    g = eichler(L, L.v(), 2 * L.e(1))
    assert finite_order(g) is None
    # g^k(s) = s + 2k e_1 + 2k^2 v, so no power is the identity
    for k in range(1, 8):
        assert (g ** k)(L.s()) == L.s() + (2 * k) * L.e(1) + (2 * k * k) * L.v()


def test_finite_order_against_brute_force():
    rng = random.Random(3)
    for _ in range(150):
        f = random_reflection_word(make_lattice(rng.randint(2, 5), "HE"), rng, rng.randint(0, 6))
        assert finite_order(f) == brute_force_order(f)


def test_classify_examples():
    L = sve(2)
    c = classify(reflection(L, L.e(1)))
    assert c.is_elliptic and c.order == 2
    g = eichler(L, L.v(), 2 * L.e(1))
    c = classify(g)
    assert c.is_parabolic and c.fixed_class == L.v() and c.on_hyperboloid
    h = eichler(L, L.v(), 2 * L.e(1)) @ eichler(L, L.s(), 2 * L.e(1))
    assert h.matrix == ((1, 2, 2), (2, 9, 6), (2, 6, 5))
    assert classify(h).is_hyperbolic
    fixed = il.kernel(il.matsub(h.matrix, il.identity(3)), 3)
    assert len(fixed) == 1 and form_eval(L, L.vector(fixed[0]), L.vector(fixed[0])) == -3
    # geometric growth of h^k s
    sizes = [max(abs(c) for c in (h ** k)(L.s()).coords) for k in range(1, 8)]
    assert all(b >= 5 * a for a, b in zip(sizes, sizes[1:]))


def test_minus_identity_is_off_the_hyperboloid():
    L = make_lattice(3, "HE")
    minus = Isometry(L, tuple(tuple(-x for x in r) for r in il.identity(4)))
    c = classify(minus)
    assert c.is_elliptic and c.order == 2 and not c.on_hyperboloid


def test_parabolic_fixed_class_and_equivariance():
    L = sve(3)
    g = eichler(L, L.v(), 2 * L.e(1))
    assert parabolic_fixed_class(g) == L.v()
    with pytest.raises(LatticeError):
        parabolic_fixed_class(reflection(L, L.e(1)))
    rng = random.Random(4)
    for _ in range(30):
        a = random_reflection_word(L, rng, 8).in_basis("SVE")
        cg = g.conjugate(a)
        w = parabolic_fixed_class(cg)
        assert w == sign_normalize(a(L.v()))
        assert check_fixed_class(cg, w)


def test_classification_is_conjugation_invariant():
    rng = random.Random(5)
    for _ in range(40):
        L = make_lattice(rng.randint(2, 4), "HE")
        f = random_reflection_word(L, rng, rng.randint(1, 6))
        a = random_reflection_word(L, rng, 6)
        c1, c2 = classify(f), classify(f.conjugate(a))
        assert c1.kind == c2.kind
        if c1.is_parabolic:
            assert check_fixed_class(f, c1.fixed_class)
        if c1.is_hyperbolic:
            fixed = il.kernel(il.matsub(f.matrix, il.identity(L.rank)), L.rank)
            gf = tuple(tuple(il.bilinear(x, L.gram, y) for y in fixed) for x in fixed)
            assert not fixed or il.det(gf) != 0
