"""Sparse Laurent polynomials in three commuting units lam, mu, nu.

Coefficients are ints, exponents may be negative. Enough ring structure
to multiply 2x2 matrices and compare them projectively.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exps = tuple[int, int, int]
VARS = ("lam", "mu", "nu")


@dataclass(frozen=True)
class LaurentScalar:
    terms: tuple[tuple[Exps, int], ...] = ()

    @classmethod
    def from_dict(cls, d: Mapping[Exps, int]) -> LaurentScalar:
        return cls(tuple(sorted((e, c) for e, c in d.items() if c)))

    @classmethod
    def const(cls, c: int) -> LaurentScalar:
        return cls.from_dict({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> LaurentScalar:
        e = [0, 0, 0]
        e[VARS.index(name)] = power
        return cls.from_dict({tuple(e): 1})

    def as_dict(self) -> dict[Exps, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: Scalarish) -> LaurentScalar:
        other = _lift(other)
        d = self.as_dict()
        for e, c in other.terms:
            d[e] = d.get(e, 0) + c
        return LaurentScalar.from_dict(d)

    __radd__ = __add__

    def __neg__(self) -> LaurentScalar:
        return LaurentScalar(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: Scalarish) -> LaurentScalar:
        return self + (-_lift(other))

    def __rsub__(self, other: Scalarish) -> LaurentScalar:
        return _lift(other) - self

    def __mul__(self, other: Scalarish) -> LaurentScalar:
        other = _lift(other)
        d: dict[Exps, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                d[e] = d.get(e, 0) + c1 * c2
        return LaurentScalar.from_dict(d)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentScalar:
        if k < 0:
            return self.unit_inverse() ** (-k)
        out = LaurentScalar.const(1)
        for _ in range(k):
            out = out * self
        return out

    def is_unit(self) -> bool:
        return len(self.terms) == 1 and self.terms[0][1] in (1, -1)

    def unit_inverse(self) -> LaurentScalar:
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit (only +-monomials are)")
        (e, c), = self.terms
        return LaurentScalar.from_dict({(-e[0], -e[1], -e[2]): c})

    def subs(self, **images: Scalarish) -> LaurentScalar:
        """Substitute variables; an image raised to a negative power must be a unit."""
        imgs = [_lift(images[v]) if v in images else LaurentScalar.var(v) for v in VARS]
        out = LaurentScalar()
        for e, c in self.terms:
            t = LaurentScalar.const(c)
            for img, k in zip(imgs, e):
                if k:
                    t = t * img ** k
            out = out + t
        return out

    def evaluate(self, lam: Fraction, mu: Fraction = Fraction(1), nu: Fraction = Fraction(1)) -> Fraction:
        vals = (Fraction(lam), Fraction(mu), Fraction(nu))
        total = Fraction(0)
        for e, c in self.terms:
            t = Fraction(c)
            for x, k in zip(vals, e):
                t *= x ** k
            total += t
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, e) if k)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


Scalarish = Union[LaurentScalar, int]


def _lift(x: Scalarish) -> LaurentScalar:
    return x if isinstance(x, LaurentScalar) else LaurentScalar.const(int(x))


@dataclass(frozen=True)
class LaurentMat2:
    """[[a, b], [c, d]] over LaurentScalar."""

    a: LaurentScalar
    b: LaurentScalar
    c: LaurentScalar
    d: LaurentScalar

    @classmethod
    def of(cls, rows: Iterable[Iterable[Scalarish]]) -> LaurentMat2:
        (a, b), (c, d) = rows
        return cls(_lift(a), _lift(b), _lift(c), _lift(d))

    @classmethod
    def identity(cls) -> LaurentMat2:
        return cls.of([[1, 0], [0, 1]])

    def entries(self) -> tuple[LaurentScalar, ...]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: LaurentMat2) -> LaurentMat2:
        return LaurentMat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                           self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def scale(self, k: Scalarish) -> LaurentMat2:
        return LaurentMat2(*(k * x for x in self.entries()))

    def transpose(self) -> LaurentMat2:
        return LaurentMat2(self.a, self.c, self.b, self.d)

    def det(self) -> LaurentScalar:
        return self.a * self.d - self.b * self.c

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    def subs(self, **images: Scalarish) -> LaurentMat2:
        return LaurentMat2(*(x.subs(**images) for x in self.entries()))

    def evaluate(self, lam, mu=1, nu=1) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        a, b, c, d = (x.evaluate(lam, mu, nu) for x in self.entries())
        return ((a, b), (c, d))
