"""Exact class coefficients of the unitary and orthogonal circular ensembles.

The coefficient v(c) attached to a cycle type c = (c1, ..., ck) satisfies,
with c1 taken as the largest part,

  unitary:     N v(c) + sum_{p+q=c1} v(p,q,c2,...)
                 + sum_{j>=2} cj v(c1+cj, ..., cj omitted, ...)
                 = [c1 = 1] v(c2, ..., ck)

  orthogonal:  (N + c1) v(c) + sum_{p+q=c1} v(p,q,c2,...)
                 + 2 sum_{j>=2} cj v(c1+cj, ..., cj omitted, ...)
                 = [c1 = 1] v(c2, ..., ck)

with v() = 1.  The inner sum runs over ordered pairs (p, q) of positive
integers, so a part c1 contributes c1 - 1 split terms.  Splitting and
merging both stay inside the set of partitions of the same total, so the
relations are solved one total weight at a time as an exact linear system
over the field of rational functions in N.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .perms import CycleType
from .ratfun import Poly, RationalFunction

Partition = tuple[int, ...]

ONE = RationalFunction.const(1)
ZERO = RationalFunction.const(0)


def partitions(total: int) -> Iterator[Partition]:
    """All partitions of `total` as descending tuples."""

    def rec(remaining: int, cap: int) -> Iterator[Partition]:
        if remaining == 0:
            yield ()
            return
        for head in range(min(cap, remaining), 0, -1):
            for tail in rec(remaining - head, head):
                yield (head,) + tail

    yield from rec(total, total)


def _normalize(parts: Iterable[int]) -> Partition:
    p = tuple(sorted((int(x) for x in parts), reverse=True))
    if any(x < 1 for x in p):
        raise ValueError(f"cycle type parts must be positive, got {p}")
    return p


def _relation_row(c: Partition, orthogonal: bool) -> tuple[dict[Partition, RationalFunction], Partition | None]:
    """Coefficients of the weight-|c| relation anchored at partition c.

    Returns (row, rhs_partition) where row maps same-weight partitions to
    their coefficient and rhs_partition is the lower-weight partition on
    the right side (or None when the right side vanishes).
    """
    c1, rest = c[0], c[1:]
    N = RationalFunction.N()
    row: dict[Partition, RationalFunction] = {}

    def add(part: Partition, coef: RationalFunction) -> None:
        row[part] = row.get(part, ZERO) + coef

    diag = N + c1 if orthogonal else N
    add(c, diag)
    for p in range(1, c1):
        add(_normalize((p, c1 - p) + rest), ONE)
    merge_scale = 2 if orthogonal else 1
    for j, cj in enumerate(rest):
        merged = _normalize((c1 + cj,) + rest[:j] + rest[j + 1:])
        add(merged, RationalFunction.const(merge_scale * cj))
    rhs = rest if c1 == 1 else None
    return row, rhs


def _solve_weight(t: int, orthogonal: bool,
                  lower: dict[Partition, RationalFunction]) -> dict[Partition, RationalFunction]:
    """Solve the coupled relations for all partitions of total t."""
    parts = list(partitions(t))
    index = {p: i for i, p in enumerate(parts)}
    n = len(parts)
    # dense augmented matrix over the rational function field
    mat = [[ZERO] * (n + 1) for _ in range(n)]
    for i, c in enumerate(parts):
        row, rhs = _relation_row(c, orthogonal)
        for p, coef in row.items():
            mat[i][index[p]] = mat[i][index[p]] + coef
        if rhs is not None:
            mat[i][n] = lower[rhs] if rhs else ONE

    # Gaussian elimination with exact pivoting
    for col in range(n):
        pivot = next((r for r in range(col, n) if not mat[r][col].is_zero()), None)
        if pivot is None:
            raise ArithmeticError(f"singular class-coefficient system at weight {t}")
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = ONE / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for r in range(n):
            if r != col and not mat[r][col].is_zero():
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[col])]
    return {p: mat[index[p]][n] for p in parts}


@lru_cache(maxsize=None)
def _table(t: int, orthogonal: bool) -> dict[Partition, RationalFunction]:
    if t == 0:
        return {(): ONE}
    return _solve_weight(t, orthogonal, _table(t - 1, orthogonal))


def _lookup(cycle_type, orthogonal: bool) -> RationalFunction:
    if isinstance(cycle_type, CycleType):
        parts = cycle_type.parts
    else:
        parts = _normalize(cycle_type)
    return _table(sum(parts), orthogonal)[parts]


def v_cue(cycle_type) -> RationalFunction:
    """Unitary class coefficient V^U_N as an exact rational function of N."""
    return _lookup(cycle_type, orthogonal=False)


def v_coe(cycle_type) -> RationalFunction:
    """Orthogonal class coefficient V^O_N as an exact rational function of N."""
    return _lookup(cycle_type, orthogonal=True)
