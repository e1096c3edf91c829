"""The verification suite behind ``mcglattice verify`` and the acceptance tests.

Every check is exact. Randomized checks take an explicit seed so a run
can be replayed.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from . import intlinalg as il
from .fibration_model import (
    gamma_fiber_action,
    homology_action,
    identity_reports,
    letter_action,
    realize,
    realize_general,
    word,
)
from .isometries import Isometry, classify, eichler, identity_isometry, reflection, verify_isometry
from .lattice_core import BasisTag, Lattice, make_lattice
from .orbit_reduce import enumerate_primitive_isotropic, reduce_isotropic
from .stabilizers import (
    eichler_generators,
    extend_from_e_images,
    lambda_coordinate,
    lambda_generators,
    random_stab_element,
    stab_decompose,
)

N_MAX = 9
REDUCE_N_MAX = 8
POWER_BOUND = 120


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


class _Fail(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def _ns(n_max: int, top: int = N_MAX) -> range:
    return range(2, min(n_max, top) + 1)


# -- samplers -------------------------------------------------------------------


def random_even_vector(n: int, rng: random.Random, bound: int = 10) -> tuple[int, ...]:
    """Uniform coordinates in [-bound, bound], last one nudged toward 0 to fix parity."""
    c = [rng.randint(-bound, bound) for _ in range(n)]
    if sum(c) % 2:
        c[-1] += -1 if c[-1] > 0 else 1
    return tuple(c)


def stab_sample(N: int, count: int, seed: int) -> list[Isometry]:
    rng = random.Random(f"stab-{seed}-{N}")
    return [random_stab_element(N, rng)[1] for _ in range(count)]


def random_conjugator(L: Lattice, rng: random.Random, length: int = 12) -> Isometry:
    """A random word in reflections generating O^+ of the lattice."""
    he = make_lattice(L.N, BasisTag.HE)
    refs = [reflection(he, he.E(i)) for i in range(1, L.N + 1)]
    refs += [reflection(he, he.E(i) - he.E(i + 1)) for i in range(1, L.N)]
    top = min(L.N, 3)
    refs.append(reflection(he, he.H() - sum((he.E(i) for i in range(2, top + 1)), he.E(1))))
    a = identity_isometry(he)
    for _ in range(rng.randint(0, length)):
        a = a @ rng.choice(refs)
    return a.in_basis(L.basis)


def brute_force_order(f: Isometry, bound: int = POWER_BOUND) -> Optional[int]:
    m, ident = f.matrix, il.identity(f.lattice.rank)
    p = m
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = il.matmul(p, m)
    return None


# -- the eight acceptance checks -----------------------------------------------


def check_generator_identity(n_max: int = N_MAX, seed: int = 0) -> str:
    count = 0
    for N in _ns(n_max):
        refl, eich = lambda_generators(N), eichler_generators(N)
        _require(len(refl) == N - 1, f"N={N}: expected {N - 1} generators")
        for k, (a, b) in enumerate(zip(refl, eich)):
            _require(a.matrix == b.matrix, f"N={N}: generator {k} differs from its Eichler form")
            count += 1
    return f"{count} generators equal their Eichler matrices"


def check_coordinate_section(n_max: int = N_MAX, seed: int = 0, per_n: int = 100) -> str:
    total = 0
    for N in _ns(n_max):
        rng = random.Random(f"even-{seed}-{N}")
        L = make_lattice(N, BasisTag.SVE)
        for _ in range(per_n):
            c = random_even_vector(N - 1, rng)
            e = L.vector((0, 0) + c)
            got = lambda_coordinate(eichler(L, L.v(), e), L.v())
            _require(got.even_vector == c, f"N={N}: c(E(v, {c})) = {got.even_vector}")
            total += 1
    return f"{total} even vectors recovered"


def check_split_sequence(n_max: int = N_MAX, seed: int = 0, per_n: int = 100) -> str:
    total = 0
    for N in _ns(n_max):
        for h in stab_sample(N, per_n, seed):
            dec = stab_decompose(h)
            _require(dec.recompose().matrix == h.matrix, f"N={N}: recomposition differs")
            total += 1
    return f"{total} words recomposed exactly"


HYPERBOLIC_EXAMPLE = ((1, 2, 2), (2, 9, 6), (2, 6, 5))


def check_classification(n_max: int = N_MAX, seed: int = 0, per_n: int = 100) -> str:
    ell = par = 0
    for N in _ns(n_max):
        v = make_lattice(N, BasisTag.SVE).v()
        for h in stab_sample(N, per_n, seed):
            c = classify(h)
            k = brute_force_order(h)
            if k is not None:
                _require(c.is_elliptic and c.order == k, f"N={N}: order {k} but classified {c}")
                ell += 1
            else:
                _require(c.is_parabolic and c.fixed_class == v, f"N={N}: infinite order but classified {c}")
                par += 1
    hyp = verify_isometry(make_lattice(2, BasisTag.SVE), HYPERBOLIC_EXAMPLE)
    _require(classify(hyp).is_hyperbolic, "explicit N=2 matrix is not hyperbolic")
    return f"{ell} elliptic, {par} parabolic, explicit example hyperbolic"


def check_orbit_reduction(n_max: int = N_MAX, seed: int = 0, bound: int = 3) -> str:
    total = 0
    for N in _ns(n_max, REDUCE_N_MAX):
        L = make_lattice(N, BasisTag.HE)
        for w in enumerate_primitive_isotropic(L, bound):
            f = reduce_isotropic(L, w)
            m = f.matrix
            _require(f(w) == L.v(), f"N={N}: f({w.coords}) != v")
            _require(il.matmul(il.matmul(il.transpose(m), L.gram), m) == L.gram, f"N={N}: not an isometry")
            total += 1
    return f"{total} isotropic classes reduced to v"


def check_symbolic_identities(n_max: int = N_MAX, seed: int = 0) -> str:
    reports = identity_reports()
    bad = [r["identity"] for r in reports if not r["holds"]]
    _require(not bad, f"failed: {', '.join(bad)}")
    return f"{len(reports)} Laurent identities hold"


def check_realization(n_max: int = N_MAX, seed: int = 0, per_n: int = 100, general_per_n: int = 25) -> str:
    total = gen = 0
    for N in _ns(n_max):
        for h in stab_sample(N, per_n, seed):
            _require(homology_action(realize(h)) == h, f"N={N}: recipe action differs")
            total += 1
    for N in _ns(n_max, REDUCE_N_MAX):
        rng = random.Random(f"general-{seed}-{N}")
        L = make_lattice(N, BasisTag.HE)
        for h in stab_sample(N, general_per_n, seed + 1):
            a = random_conjugator(L, rng)
            hh = h.in_basis(BasisTag.HE).conjugate(a)
            w = a(L.v())
            alpha, rec = realize_general(hh, w)
            al = alpha.in_basis(BasisTag.SVE)
            back = (al.inverse() @ homology_action(rec) @ al).in_basis(BasisTag.HE)
            _require(back == hh and alpha(w) == L.v(), f"N={N}: realize_general contract fails")
            gen += 1
    return f"{total} recipes for Stab(v), {gen} conjugated recipes"


def check_gamma_cross_validation(n_max: int = N_MAX, seed: int = 0) -> str:
    count = 0
    for N in _ns(n_max):
        for k in range(1, N - 1):
            _require(letter_action(N, "gamma", k) == gamma_fiber_action(N, k), f"N={N}, k={k}: mismatch")
            count += 1
    return f"{count} gamma actions agree"


# -- further invariants ---------------------------------------------------------


def check_lambda_abelian(n_max: int = N_MAX, seed: int = 0) -> str:
    for N in _ns(n_max):
        gens = lambda_generators(N)
        for a in gens:
            for b in gens:
                _require(a @ b == b @ a, f"N={N}: generators do not commute")
    return "Lambda_v generators commute"


def check_lambda_parabolic(n_max: int = N_MAX, seed: int = 0, per_n: int = 20) -> str:
    total = 0
    for N in _ns(n_max):
        rng = random.Random(f"lpar-{seed}-{N}")
        L = make_lattice(N, BasisTag.SVE)
        for _ in range(per_n):
            c = random_even_vector(N - 1, rng, 4)
            if not any(c):
                continue
            f = eichler(L, L.v(), L.vector((0, 0) + c))
            cl = classify(f)
            _require(cl.is_parabolic and cl.fixed_class == L.v(), f"N={N}: E(v, {c}) classified {cl.kind}")
            total += 1
    return f"{total} nontrivial Lambda_v elements are parabolic at v"


def check_determination(n_max: int = N_MAX, seed: int = 0, per_n: int = 30) -> str:
    total = 0
    for N in _ns(n_max):
        L = make_lattice(N, BasisTag.SVE)
        for h in stab_sample(N, per_n, seed + 2):
            h2 = extend_from_e_images(N, [h(L.e(k)) for k in range(1, N)])
            _require(h2 == h, f"N={N}: action on the e_k does not determine h")
            total += 1
    return f"{total} elements determined by their action on e_k"


def check_phi_commute(n_max: int = N_MAX, seed: int = 0) -> str:
    for N in _ns(n_max):
        n = N - 1
        for i in range(1, n):
            for j in range(1, n):
                comm = word(N, [("phi", i), ("phi", j), ("phi", i, -1), ("phi", j, -1)])
                _require(homology_action(comm).is_identity(), f"N={N}: [phi_{i}, phi_{j}] != 1")
            _require(letter_action(N, "phi", i) == lambda_generators(N)[i], f"N={N}: [phi_{i}] != f_{i}")
        _require(letter_action(N, "psi", 1) == lambda_generators(N)[0], f"N={N}: [psi] != g")
    return "phi_k commute in homology and section the generators"


ACCEPTANCE: list[tuple[int, str, Callable[..., str]]] = [
    (1, "generator_identity", check_generator_identity),
    (2, "coordinate_section", check_coordinate_section),
    (3, "split_exact_sequence", check_split_sequence),
    (4, "parabolic_classification", check_classification),
    (5, "orbit_reduction", check_orbit_reduction),
    (6, "symbolic_identities", check_symbolic_identities),
    (7, "realization_pipeline", check_realization),
    (8, "gamma_cross_validation", check_gamma_cross_validation),
]

EXTRA: list[tuple[str, Callable[..., str]]] = [
    ("lambda_abelian", check_lambda_abelian),
    ("lambda_parabolic", check_lambda_parabolic),
    ("determination", check_determination),
    ("phi_commute", check_phi_commute),
]


def run_check(name: str, fn: Callable[..., str], n_max: int = N_MAX, seed: int = 0) -> CheckResult:
    t = time.perf_counter()
    try:
        detail = fn(n_max=n_max, seed=seed)
        ok = True
    except _Fail as exc:
        detail, ok = str(exc), False
    except Exception as exc:  # a crash is a failure, reported with its type
        detail, ok = f"{type(exc).__name__}: {exc}", False
    return CheckResult(name, ok, detail, time.perf_counter() - t)


def run_suite(n_max: int = N_MAX, seed: int = 0) -> list[CheckResult]:
    out = [run_check(f"C{num} {name}", fn, n_max, seed) for num, name, fn in ACCEPTANCE]
    out += [run_check(name, fn, n_max, seed) for name, fn in EXTRA]
    return out
