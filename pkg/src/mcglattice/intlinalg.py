"""Exact integer linear algebra on tuple-of-tuple matrices.

Matrices are stored row-major as tuples of tuples of Python ints, so
entries never overflow. Nothing here knows about lattices or bases; the
routines are the shared plumbing for kernels, saturation checks and
short-vector enumeration on small (rank <= 10) inputs.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, floor, gcd, isqrt
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    if not a:
        return ()
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Matrix, x: Sequence[int]) -> Vector:
    return tuple(sum(r * c for r, c in zip(row, x)) for row in a)


def matsub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def columns(a: Matrix) -> list[Vector]:
    return list(transpose(a))


def from_columns(cols: Sequence[Sequence[int]]) -> Matrix:
    return transpose(as_matrix(cols))


def bilinear(x: Sequence[int], g: Matrix, y: Sequence[int]) -> int:
    return sum(xi * gij * yj for xi, row in zip(x, g) for gij, yj in zip(row, y) if xi and gij)


def content(x: Sequence[int]) -> int:
    g = 0
    for c in x:
        g = gcd(g, c)
    return g


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def solve_linear_form(g: Sequence[int]) -> Vector:
    """Particular integer solution x of sum(g_i x_i) = gcd(g).

    Folds the extended gcd left to right, so the answer is a fixed
    function of g.
    """
    n = len(g)
    x = [0] * n
    acc = 0
    for i, gi in enumerate(g):
        d, s, t = xgcd(acc, gi)
        x = [s * xj for xj in x]
        x[i] = t
        acc = d
    return tuple(x)


def det(a: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Matrix) -> list[list[Fraction]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def unimodular_inverse(a: Matrix) -> Matrix:
    inv = rational_inverse(a)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not invertible over the integers")
    return tuple(tuple(int(x) for x in row) for row in inv)


def solve_rational(a: Matrix, b: Sequence[int]) -> list[Fraction]:
    """Solve the square system a x = b over the rationals."""
    inv = rational_inverse(a)
    return [sum(r * bi for r, bi in zip(row, b)) for row in inv]


def hermite(rows: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns (H, U) with U unimodular and U @ A == H. H is in row echelon
    form, pivots are positive and entries above each pivot lie in
    [0, pivot). Zero rows of H sit at the bottom.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        # Euclid down the column, pairing the pivot row with each row below it
        for i in range(r + 1, m):
            if a[i][c] == 0:
                continue
            g, s, t = xgcd(a[r][c], a[i][c])
            p, q = a[r][c] // g, a[i][c] // g
            ar, ai = a[r], a[i]
            a[r] = [s * x + t * y for x, y in zip(ar, ai)]
            a[i] = [-q * x + p * y for x, y in zip(ar, ai)]
            ur, ui = u[r], u[i]
            u[r] = [s * x + t * y for x, y in zip(ur, ui)]
            u[i] = [-q * x + p * y for x, y in zip(ur, ui)]
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        piv = a[r][c]
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return as_matrix(a), as_matrix(u)


def row_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    h, _ = hermite(rows)
    return sum(1 for row in h if any(row))


def kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[Vector]:
    """Basis of the saturated lattice {x in Z^n : a x = 0}.

    The basis is returned in row Hermite normal form, so it is a fixed
    function of the solution lattice and not of the route taken.
    """
    a = as_matrix(a)
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    if not a:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    h, u = hermite(transpose(a))
    basis = [u[i] for i in range(n) if not any(h[i])]
    if not basis:
        return []
    hk, _ = hermite(basis)
    return [row for row in hk if any(row)]


def elementary_divisors(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith invariants of a, in divisibility order."""
    m = [list(r) for r in a]
    if not m or not m[0]:
        return []
    # Alternate row and column Hermite reduction until diagonal.
    while True:
        h, _ = hermite(m)
        ht = transpose(h)
        h2, _ = hermite(ht)
        if all(h2[i][j] == 0 for i in range(len(h2)) for j in range(len(h2[0])) if i != j):
            diag = [h2[i][i] for i in range(min(len(h2), len(h2[0]))) if h2[i][i] != 0]
            break
        m = [list(r) for r in h2]
    diag = [abs(d) for d in diag]
    # gcd/lcm swaps restore the divisibility chain
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                g = gcd(diag[i], diag[j])
                l = diag[i] * diag[j] // g
                if (diag[i], diag[j]) != (g, l):
                    diag[i], diag[j] = g, l
                    changed = True
    return diag


def is_saturated(rows: Sequence[Sequence[int]]) -> bool:
    return all(d == 1 for d in elementary_divisors(rows))


# -- positive definite Gram matrices -------------------------------------


def gram_lll(g: Matrix, delta: Fraction = Fraction(3, 4)) -> tuple[Matrix, Matrix]:
    """LLL reduction of a positive definite Gram matrix.

    Returns (T, G') with rows of T giving the reduced basis in terms of the
    input basis, and G' = T G T^t. Exact rational arithmetic with the
    usual incremental Gram-Schmidt updates; meant for small ranks.
    """
    n = len(g)
    gm = [list(row) for row in g]
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return as_matrix(t), as_matrix(gm)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bs = [Fraction(0)] * n
    bs[0] = Fraction(gm[0][0])

    def gs_row(k):
        for j in range(k):
            mu[k][j] = (gm[k][j] - sum(mu[j][i] * mu[k][i] * bs[i] for i in range(j))) / bs[j]
        bs[k] = gm[k][k] - sum(mu[k][j] * mu[k][j] * bs[j] for j in range(k))

    def red(k, l):
        if abs(mu[k][l]) * 2 <= 1:
            return
        q = round(mu[k][l])
        t[k] = [x - q * y for x, y in zip(t[k], t[l])]
        gkk = gm[k][k] - 2 * q * gm[k][l] + q * q * gm[l][l]
        row = [x - q * y for x, y in zip(gm[k], gm[l])]
        gm[k] = row
        for r in range(n):
            gm[r][k] = row[r]
        gm[k][k] = gkk
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k):
        t[k], t[k - 1] = t[k - 1], t[k]
        gm[k], gm[k - 1] = gm[k - 1], gm[k]
        for row in gm:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        b = bs[k] + m * m * bs[k - 1]
        mu[k][k - 1] = m * bs[k - 1] / b
        bs[k] = bs[k - 1] * bs[k] / b
        bs[k - 1] = b
        for i in range(k + 1, kmax + 1):
            x = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * x
            mu[i][k - 1] = x + mu[k][k - 1] * mu[i][k]

    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gs_row(k)
        red(k, k - 1)
        if bs[k] < (delta - mu[k][k - 1] ** 2) * bs[k - 1]:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return as_matrix(t), as_matrix(gm)


def short_vectors(g: Matrix, bound: int) -> list[Vector]:
    """All nonzero x with x^t g x <= bound, for positive definite g.

    Fincke-Pohst enumeration in exact arithmetic. Both x and -x are
    returned.
    """
    n = len(g)
    if n == 0:
        return []
    q = [[Fraction(x) for x in row] for row in g]
    # q[i][i] -> diagonal of the LDL^t form, q[i][j] (j > i) -> mu_ij
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    out: list[Vector] = []
    x = [0] * n

    def rec(i: int, remaining: Fraction) -> None:
        centre = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        qi = q[i][i]
        # (x_i - centre)^2 * qi <= remaining
        span_sq = remaining / qi
        lo = _ceil_sqrt_shift(centre, span_sq, -1)
        hi = _ceil_sqrt_shift(centre, span_sq, 1)
        for xi in range(lo, hi + 1):
            d = xi - centre
            rest = remaining - qi * d * d
            if rest < 0:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, Fraction(bound))
    return out


def _ceil_sqrt_shift(centre: Fraction, span_sq: Fraction, direction: int) -> int:
    # Integer endpoint safely outside centre +- sqrt(span_sq); candidates
    # are filtered exactly by the caller.
    r = isqrt(span_sq.numerator // span_sq.denominator) + 1
    if direction < 0:
        return floor(centre) - r
    return ceil(centre) + r
