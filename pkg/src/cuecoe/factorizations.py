"""Monotone and palindromic primitive factorizations.

A monotone factorization of a permutation tau on {1..t} is a product
tau = (s1 r1)(s2 r2)...(sv rv) with s_j < r_j and s_1 <= s_2 <= ... <= s_v.
The palindromic variant on the barred set Z_t is
tau = (s1 r1)...(sv rv)(sv~ rv~)...(s1~ r1~) where x~ is the barred mirror
of x and the monotone condition applies to the left factors under the
linear order 1 < 1~ < 2 < 2~ < ... < t < t~.

Counting is done by exact recursions on the cycle type; enumeration by a
depth-first search that serves as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterator

from .perms import (CycleType, Label, Permutation, as_label, barred_domain,
                    is_valid_orthogonal_target, plain_domain)
from .ratfun import LaurentSeries
from fractions import Fraction

Partition = tuple[int, ...]


@dataclass(frozen=True, order=True)
class Transposition:
    """A factor (s r) with s < r in the fixed linear order."""

    s: Label
    r: Label

    def __post_init__(self):
        object.__setattr__(self, "s", as_label(self.s))
        object.__setattr__(self, "r", as_label(self.r))
        if not self.s < self.r:
            raise ValueError(f"transposition requires s < r, got ({self.s} {self.r})")

    def as_permutation(self, size: int, barred: bool) -> Permutation:
        return Permutation.from_mapping({self.s: self.r, self.r: self.s}, size, barred)

    def mirror(self) -> "Transposition":
        a, b = self.s.bar, self.r.bar
        return Transposition(min(a, b), max(a, b))

    def __str__(self) -> str:
        return f"({self.s} {self.r})"


@dataclass(frozen=True)
class MonotoneFactorization:
    factors: tuple[Transposition, ...]
    target: Permutation

    def __post_init__(self):
        prod = reduce(Permutation.compose,
                      (f.as_permutation(self.target.size, self.target.barred)
                       for f in self.factors),
                      Permutation.identity(self.target.size, self.target.barred))
        if prod != self.target:
            raise ValueError("factors do not multiply to the target")
        ss = [f.s for f in self.factors]
        if ss != sorted(ss):
            raise ValueError("factorization is not monotone")

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return "".join(map(str, self.factors)) or "()"


@dataclass(frozen=True)
class PalindromicFactorization:
    """Left half of a palindromic factorization; the right half is the
    mirrored reversal."""

    left_factors: tuple[Transposition, ...]
    target: Permutation

    def __post_init__(self):
        ident = Permutation.identity(self.target.size, True)
        left = reduce(Permutation.compose,
                      (f.as_permutation(self.target.size, True)
                       for f in self.left_factors), ident)
        right = reduce(Permutation.compose,
                       (f.mirror().as_permutation(self.target.size, True)
                        for f in reversed(self.left_factors)), ident)
        if left.compose(right) != self.target:
            raise ValueError("palindromic factors do not multiply to the target")
        ss = [f.s for f in self.left_factors]
        if ss != sorted(ss):
            raise ValueError("factorization is not monotone")

    def __len__(self) -> int:
        return len(self.left_factors)

    def all_factors(self) -> tuple[Transposition, ...]:
        return self.left_factors + tuple(f.mirror() for f in reversed(self.left_factors))

    def __str__(self) -> str:
        return "".join(map(str, self.all_factors())) or "()"


# -- enumeration -------------------------------------------------------------


def _min_moved(p: Permutation) -> Label | None:
    for x in p.domain:
        if p(x) != x:
            return x
    return None


def _transposition_distance(p: Permutation) -> int:
    """Minimal number of transpositions multiplying to p."""
    return sum(len(c) - 1 for c in p.cycles())


def enumerate_monotone(tau: Permutation, v: int) -> list[MonotoneFactorization]:
    """All monotone factorizations of tau into exactly v transpositions."""
    if tau.barred:
        raise ValueError("monotone factorizations are for plain permutations")
    domain = plain_domain(tau.size)
    out: list[MonotoneFactorization] = []

    def dfs(rho: Permutation, bound: Label, left: int,
            acc: list[Transposition]) -> None:
        if left == 0:
            if rho.is_identity():
                out.append(MonotoneFactorization(tuple(acc), tau))
            return
        dist = _transposition_distance(rho)
        if dist > left or (left - dist) % 2:
            return
        m = _min_moved(rho)
        hi = m if m is not None else domain[-1]
        for s in domain:
            if s < bound or s > hi:
                continue
            for r in domain:
                if r <= s:
                    continue
                # peel the factor (s r) off the left: rho = (s r) * rest
                t = Transposition(s, r)
                rest = t.as_permutation(tau.size, False).compose(rho)
                acc.append(t)
                dfs(rest, s, left - 1, acc)
                acc.pop()

    dfs(tau, domain[0], v, [])
    return out


def enumerate_palindromic(tau: Permutation, v: int) -> list[PalindromicFactorization]:
    """All palindromic factorizations of tau with v left factors."""
    if not is_valid_orthogonal_target(tau):
        raise ValueError("not a valid orthogonal target permutation")
    domain = barred_domain(tau.size)
    out: list[PalindromicFactorization] = []

    def dfs(rho: Permutation, bound: Label, left: int,
            acc: list[Transposition]) -> None:
        if left == 0:
            if rho.is_identity():
                out.append(PalindromicFactorization(tuple(acc), tau))
            return
        if _transposition_distance(rho) > 2 * left:
            return
        m = _min_moved(rho)
        hi = m if m is not None else domain[-1]
        for s in domain:
            if s < bound or s > hi:
                continue
            for r in domain:
                if r <= s:
                    continue
                # peel (s r) off the left and its mirror off the right
                t = Transposition(s, r)
                a = t.as_permutation(tau.size, True)
                b = t.mirror().as_permutation(tau.size, True)
                rest = a.compose(rho).compose(b)
                acc.append(t)
                dfs(rest, s, left - 1, acc)
                acc.pop()

    dfs(tau, domain[0], v, [])
    return out


# -- counting recursions -----------------------------------------------------


def _normalize(c) -> Partition:
    parts = tuple(sorted((int(x) for x in c), reverse=True))
    if any(x < 1 for x in parts):
        raise ValueError(f"partition parts must be positive, got {parts}")
    return parts


@lru_cache(maxsize=None)
def _count_u(c: Partition, v: int) -> int:
    if v < 0:
        return 0
    if not c:
        return 1 if v == 0 else 0
    c1, rest = c[0], c[1:]
    total = 0
    if c1 == 1:
        total += _count_u(rest, v)
    for q in range(1, c1):
        total += _count_u(_normalize((q, c1 - q) + rest), v - 1)
    for j, cj in enumerate(rest):
        total += cj * _count_u(_normalize((c1 + cj,) + rest[:j] + rest[j + 1:]), v - 1)
    return total


@lru_cache(maxsize=None)
def _count_o(c: Partition, v: int) -> int:
    if v < 0:
        return 0
    if not c:
        return 1 if v == 0 else 0
    c1, rest = c[0], c[1:]
    total = 0
    if c1 == 1:
        total += _count_o(rest, v)
    for j, cj in enumerate(rest):
        total += 2 * cj * _count_o(_normalize((c1 + cj,) + rest[:j] + rest[j + 1:]), v - 1)
    for q in range(1, c1):
        total += _count_o(_normalize((q, c1 - q) + rest), v - 1)
    total += c1 * _count_o(c, v - 1)
    return total


def count_monotone(c, v: int) -> int:
    """Number of monotone factorizations of a permutation of cycle type c
    into v transpositions."""
    if v < 0:
        raise ValueError("factor count must be nonnegative")
    return _count_u(_normalize(c), v)


def count_palindromic(c, v: int) -> int:
    """Number of palindromic factorizations with v left factors; c is the
    halved cycle type of the target."""
    if v < 0:
        raise ValueError("factor count must be nonnegative")
    return _count_o(_normalize(c), v)


# -- canonical targets and the semiclassical series --------------------------


def canonical_unitary_target(c) -> Permutation:
    """The permutation (1 2 ... c1)(c1+1 ...)... of cycle type c."""
    parts = _normalize(c)
    t = sum(parts)
    cycles, start = [], 1
    for p in parts:
        cycles.append(range(start, start + p))
        start += p
    return Permutation.from_cycles(cycles, max(t, 1), False)


def canonical_orthogonal_target(c) -> Permutation:
    """A valid orthogonal target on Z_t whose halved cycle type is c,
    built from mirror pairs of consecutive blocks."""
    parts = _normalize(c)
    t = sum(parts)
    cycles, start = [], 1
    for p in parts:
        block = list(range(start, start + p))
        cycles.append(block)
        cycles.append([-z for z in reversed(block)])
        start += p
    tau = Permutation.from_cycles(cycles, max(t, 1), True)
    assert is_valid_orthogonal_target(tau)
    return tau


def _delta_series(c, order: int, counter) -> LaurentSeries:
    parts = _normalize(c)
    t = sum(parts)
    if order < t:
        raise ValueError(f"truncation order {order} is below the leading order {t}")
    coeffs = []
    for v in range(0, order - t + 1):
        n = counter(parts, v)
        if n:
            coeffs.append((t + v, Fraction((-1) ** v * n)))
    return LaurentSeries(tuple(coeffs), order)


def delta_series_u(c, order: int) -> LaurentSeries:
    """Signed generating series of monotone factorization counts,
    sum_v p_v (-1)^v N^-(t+v), truncated at N^-order."""
    return _delta_series(c, order, _count_u)


def delta_series_o(c, order: int) -> LaurentSeries:
    """Orthogonal analogue of delta_series_u; c is a halved cycle type."""
    return _delta_series(c, order, _count_o)
