"""Exact univariate polynomials and rational functions in the symbol N.

Coefficients are rational numbers (fractions.Fraction).  Rational functions
are kept in a canonical form (coprime numerator/denominator, monic
denominator) so that structural equality coincides with mathematical
equality.  A small Laurent-series type supports expansions around N = oo.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[int, Fraction]


class Poly:
    """Polynomial in N with Fraction coefficients, stored low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @staticmethod
    def const(c: Scalar) -> "Poly":
        return Poly([c])

    @staticmethod
    def N() -> "Poly":
        return Poly([0, 1])

    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return -(self - other)

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(0, len(rem) - len(other.coeffs) + 1)
        d = other.degree
        lead = other.leading()
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            shift = len(rem) - 1 - d
            q = rem[-1] / lead
            quot[shift] = q
            for i, b in enumerate(other.coeffs):
                rem[shift + i] -= q * b
        return Poly(quot), Poly(rem)

    def evaluate(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * Fraction(x) + c
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = self.leading()
        return Poly([c / lead for c in self.coeffs])

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self[i]
            if c == 0:
                continue
            if i == 0:
                base = str(abs(c))
            else:
                mon = "N" if i == 1 else f"N^{i}"
                base = mon if abs(c) == 1 else f"{abs(c)}*{mon}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, base))
        head_sign, head = terms[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, base in terms[1:]:
            s += f" {sign} {base}"
        return s


def _as_poly(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return None


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


class RationalFunction:
    """Quotient of two polynomials, always in canonical form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if num is None or den is None:
            raise TypeError("numerator and denominator must be Poly or scalar")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.leading()
            num = Poly([c / lead for c in num.coeffs])
            den = den.monic()
        self.num = num
        self.den = den

    @staticmethod
    def const(c: Scalar) -> "RationalFunction":
        return RationalFunction(Poly.const(c))

    @staticmethod
    def N() -> "RationalFunction":
        return RationalFunction(Poly.N())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        other = _as_rat(other)
        return other is not None and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RationalFunction":
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return -(self - other)

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return other / self

    def evaluate(self, x: Scalar) -> Fraction:
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at N = {x}")
        return self.num.evaluate(x) / d

    def __str__(self) -> str:
        if self.den == Poly.const(1):
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _as_rat(x) -> RationalFunction | None:
    if isinstance(x, RationalFunction):
        return x
    p = _as_poly(x)
    return None if p is None else RationalFunction(p)


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated expansion sum_{k >= k0} c_k N^{-k}, exact through `order`."""

    coeffs: tuple[tuple[int, Fraction], ...]  # (k, c_k) with c_k != 0, k ascending
    order: int  # coefficients are exact for all k <= order

    def coefficient(self, k: int) -> Fraction:
        if k > self.order:
            raise ValueError(f"coefficient of N^-{k} beyond truncation order {self.order}")
        for kk, c in self.coeffs:
            if kk == k:
                return c
        return Fraction(0)

    def terms(self) -> list[tuple[int, Fraction]]:
        return list(self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return f"O(N^-{self.order + 1})"
        parts = []
        for k, c in self.coeffs:
            mon = "1" if k == 0 else ("N^-%d" % k)
            if c < 0:
                parts.append(f"- {abs(c)}*{mon}" if parts else f"-{abs(c)}*{mon}")
            else:
                parts.append(f"+ {c}*{mon}" if parts else f"{c}*{mon}")
        return " ".join(parts) + f" + O(N^-{self.order + 1})"


def laurent_expand(f: RationalFunction, order: int) -> LaurentSeries:
    """Expand f in powers of 1/N around N = oo, exactly through N^-order."""
    num, den = f.num, f.den
    if num.is_zero():
        return LaurentSeries((), order)
    # write f(N) = x^{d_den - d_num} * (num rev) / (den rev) with x = 1/N,
    # then do a power series division in x
    dn, dd = num.degree, den.degree
    shift = dd - dn  # leading behaviour N^{-shift}
    a = list(reversed(num.coeffs))  # num as series in x
    b = list(reversed(den.coeffs))  # den as series in x, b[0] != 0
    nterms = order - shift + 1
    if nterms <= 0:
        return LaurentSeries((), order)
    q = []
    for i in range(nterms):
        s = a[i] if i < len(a) else Fraction(0)
        for j in range(1, min(i, len(b) - 1) + 1):
            s -= b[j] * q[i - j]
        q.append(s / b[0])
    coeffs = tuple((shift + i, c) for i, c in enumerate(q) if c != 0)
    return LaurentSeries(coeffs, order)
