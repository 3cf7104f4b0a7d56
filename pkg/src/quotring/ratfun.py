"""Exact arithmetic in GF(2)[w] and GF(2)(w).

Polynomials are Python ints used as bit vectors: bit ``i`` is the coefficient
of ``w**i``.  Rational functions carry an explicit power-of-``w`` shift so the
numerator and denominator stay ordinary polynomials with nonzero constant
term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


# --- GF(2)[w] on int bit vectors -------------------------------------------------

def pmul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def pdivmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    q = 0
    db = b.bit_length()
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q |= 1 << s
        a ^= b << s
    return q, a


def pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return a


def _trailing_zeros(a: int) -> int:
    return (a & -a).bit_length() - 1


def poly_str(a: int) -> str:
    if a == 0:
        return "0"
    terms = []
    for i in range(a.bit_length()):
        if a >> i & 1:
            terms.append("1" if i == 0 else "w" if i == 1 else f"w^{i}")
    return "+".join(terms)


@dataclass(frozen=True)
class Poly2:
    """A GF(2) polynomial in ``w``; ``bits`` is the coefficient bit vector."""

    bits: int = 0

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "Poly2":
        bits = 0
        for e in exps:
            if e < 0:
                raise ValueError("negative exponent in Poly2")
            bits ^= 1 << e
        return cls(bits)

    @property
    def exponents(self) -> frozenset[int]:
        return frozenset(i for i in range(self.bits.bit_length()) if self.bits >> i & 1)

    def __add__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.bits ^ other.bits)

    def __mul__(self, other: "Poly2") -> "Poly2":
        return Poly2(pmul(self.bits, other.bits))

    def __str__(self) -> str:
        return poly_str(self.bits)


@dataclass(frozen=True)
class Rat2:
    """``w**shift * num / den`` in lowest terms; zero is ``(0, 1, 0)``.

    Canonical form: ``num`` and ``den`` are coprime and both have constant
    term 1 (unless the value is zero), so structural equality is equality.
    """

    num: int
    den: int = 1
    shift: int = 0

    @classmethod
    def make(cls, num: int, den: int = 1, shift: int = 0) -> "Rat2":
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num == 0:
            return ZERO
        tz = _trailing_zeros(num)
        num >>= tz
        shift += tz
        tz = _trailing_zeros(den)
        den >>= tz
        shift -= tz
        g = pgcd(num, den)
        if g != 1:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
        return cls(num, den, shift)

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: "Rat2") -> "Rat2":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        base = min(self.shift, other.shift)
        a = pmul(self.num << (self.shift - base), other.den)
        b = pmul(other.num << (other.shift - base), self.den)
        return Rat2.make(a ^ b, pmul(self.den, other.den), base)

    __sub__ = __add__

    def __mul__(self, other: "Rat2") -> "Rat2":
        if self.is_zero() or other.is_zero():
            return ZERO
        return Rat2.make(pmul(self.num, other.num), pmul(self.den, other.den), self.shift + other.shift)

    def inverse(self) -> "Rat2":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return Rat2(self.den, self.num, -self.shift)

    def __pow__(self, k: int) -> "Rat2":
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        head = "" if self.shift == 0 else f"w^{self.shift}*"
        body = f"({poly_str(self.num)})"
        if self.den != 1:
            body += f"/({poly_str(self.den)})"
        return head + body


ZERO = Rat2(0, 1, 0)
ONE = Rat2(1, 1, 0)
W = Rat2(1, 1, 1)
V_SHADOW = Rat2(1, 0b11, 0)  # (1+w)^-1


# --- noncommutative Laurent polynomials in x1, x2 ---------------------------------

Term = tuple[tuple[int, int], ...]


def normalize_term(syllables: Iterable[tuple[int, int]]) -> Term:
    """Merge adjacent syllables in the same variable and drop zero exponents."""
    out: list[list[int]] = []
    for var, exp in syllables:
        if var not in (1, 2):
            raise ValueError("variables are 1 (x1) and 2 (x2)")
        if exp == 0:
            continue
        if out and out[-1][0] == var:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([var, exp])
    return tuple((v, e) for v, e in out)


def term_mul(a: Term, b: Term) -> Term:
    return normalize_term(a + b)


def term_str(t: Term) -> str:
    if not t:
        return "1"
    return " ".join(f"x{v}" if e == 1 else f"x{v}^{e}" for v, e in t)


@dataclass(frozen=True)
class LaurentPoly2:
    """A finite mod-2 sum of noncommutative Laurent monomials in ``x1, x2``."""

    terms: frozenset[Term] = frozenset()

    @classmethod
    def of(cls, *terms: Sequence[tuple[int, int]]) -> "LaurentPoly2":
        acc: set[Term] = set()
        for t in terms:
            acc ^= {normalize_term(t)}
        return cls(frozenset(acc))

    def __add__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        return LaurentPoly2(self.terms ^ other.terms)

    def __mul__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        acc: set[Term] = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {term_mul(a, b)}
        return LaurentPoly2(frozenset(acc))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_terms(self) -> list[Term]:
        return sorted(self.terms)

    def __str__(self) -> str:
        return " + ".join(term_str(t) for t in self.sorted_terms()) or "0"


def monomial(*syllables: tuple[int, int]) -> LaurentPoly2:
    return LaurentPoly2.of(syllables)


def term_eval(t: Term) -> Rat2:
    out = ONE
    for var, exp in t:
        out = out * ((V_SHADOW if var == 1 else W) ** exp)
    return out


def rat_eval(P: LaurentPoly2) -> Rat2:
    """Substitute ``x1 = (1+w)^-1`` and ``x2 = w``."""
    out = ZERO
    for t in P.terms:
        out = out + term_eval(t)
    return out


def vanishes_at_inverse(P: LaurentPoly2) -> bool:
    return rat_eval(P).is_zero()


# --- the standard vanishing families -----------------------------------------------

def poly_commutator() -> LaurentPoly2:
    """``x1 x2 + x2 x1``."""
    return LaurentPoly2.of(((1, 1), (2, 1)), ((2, 1), (1, 1)))


def poly_generator() -> LaurentPoly2:
    """``1 + x1 + x1 x2``, the image of the defining relator."""
    return LaurentPoly2.of((), ((1, 1),), ((1, 1), (2, 1)))


def poly_telescope(k: int) -> LaurentPoly2:
    """``x1 x2^k + sum_{i<k} x2^i + x1`` for ``k >= 1``."""
    terms = [((1, 1), (2, k)), ((1, 1),)] + [((2, i),) for i in range(k)]
    return LaurentPoly2.of(*terms)


def poly_telescope_negative(k: int) -> LaurentPoly2:
    """``x1 x2^-k + sum_{i=1..k} x2^-i + x1`` for ``k >= 1``."""
    terms = [((1, 1), (2, -k)), ((1, 1),)] + [((2, -i),) for i in range(1, k + 1)]
    return LaurentPoly2.of(*terms)


def poly_inverse_power(m: int) -> LaurentPoly2:
    """``x1^-m + (x1 + x1 x2^2)^m`` for ``m >= 1``."""
    base = LaurentPoly2.of(((1, 1),), ((1, 1), (2, 2)))
    acc = LaurentPoly2.of(())
    for _ in range(m):
        acc = acc * base
    return acc + LaurentPoly2.of(((1, -m),))
