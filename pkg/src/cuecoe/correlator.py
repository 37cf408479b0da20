"""Exact ensemble averages of products of scattering-matrix elements and
linear/nonlinear transport moments.

A correlator is the average of a product of matrix elements
Z_{a_1 a_1bar} ... Z_{a_t a_tbar} Z*_{b_1 b_1bar} ... Z*_{b_t b_tbar} over
the CUE (Z = U) or the COE (Z = W = U U^T).  The CUE average is a double sum
over permutation pairs matching unconjugated to conjugated indices, weighted
by the CUE class coefficients; the COE average is a single sum over
permutations of the barred index set, weighted by the COE class
coefficients.

Transport moments <prod_i Tr[X^dagger X]^{n_i}> reduce to channel sums of
these correlators; `moment` evaluates a closed-form cycle-counting sum and
`moment_bruteforce` performs the literal channel sum as an independent
oracle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .perms import (CycleType, Permutation, barred_domain, halved_cycle_type,
                    target_orthogonal)
from .ratfun import RationalFunction
from .weingarten import v_coe, v_cue

CUE = "cue"
COE = "coe"
TRANSMISSION = "transmission"
REFLECTION = "reflection"

# feasibility guards for the moment computations
MAX_TOTAL_CUE = 8
MAX_TOTAL_COE = 6
MAX_TOTAL_BRUTEFORCE = 3
MAX_LEAD_BRUTEFORCE = 4


@dataclass(frozen=True)
class CorrelatorSpec:
    """A product of matrix elements: `a` lists the (row, column) index pairs
    of the unconjugated factors, `b` those of the conjugated factors."""

    a: tuple[tuple[int, int], ...]
    b: tuple[tuple[int, int], ...]
    ensemble: str = CUE

    def __post_init__(self):
        if self.ensemble not in (CUE, COE):
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        for pair in (*self.a, *self.b):
            if len(pair) != 2 or any(int(c) < 1 for c in pair):
                raise ValueError(f"channel pair {pair!r} must be two indices >= 1")


@dataclass(frozen=True)
class MomentSpec:
    """A (possibly nonlinear) transport moment <prod_i Tr[X^dagger X]^{n_i}>
    with lead sizes N1, N2 and X the transmission or reflection block."""

    traces: tuple[int, ...]
    n1: int
    n2: int
    block: str = TRANSMISSION
    ensemble: str = CUE

    def __post_init__(self):
        if any(n < 1 for n in self.traces):
            raise ValueError("trace lengths must be >= 1")
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("lead sizes must be >= 1")
        if self.block not in (TRANSMISSION, REFLECTION):
            raise ValueError(f"unknown block {self.block!r}")
        if self.ensemble not in (CUE, COE):
            raise ValueError(f"unknown ensemble {self.ensemble!r}")

    @property
    def total(self) -> int:
        return sum(self.traces)


def _matchings(avals: list, bvals: list):
    """All bijections g: positions of avals -> positions of bvals with
    avals[k] == bvals[g(k)], as tuples of images."""
    t = len(avals)
    cand = [[j for j in range(t) if bvals[j] == avals[k]] for k in range(t)]
    order = sorted(range(t), key=lambda k: len(cand[k]))
    out: list[tuple[int, ...]] = []
    img = [-1] * t
    used = [False] * t

    def rec(i: int):
        if i == t:
            out.append(tuple(img))
            return
        k = order[i]
        for j in cand[k]:
            if not used[j]:
                used[j] = True
                img[k] = j
                rec(i + 1)
                used[j] = False
        img[k] = -1

    rec(0)
    return out


def _cue_types(a, b) -> list[CycleType]:
    """Cycle types of sigma^{-1} pi over all permutation pairs (sigma, pi)
    satisfying the index deltas, with multiplicity."""
    t = len(a)
    sigmas = _matchings([p[0] for p in a], [p[0] for p in b])
    pis = _matchings([p[1] for p in a], [p[1] for p in b])
    types = []
    for sg in sigmas:
        sg_perm = Permutation.from_one_line([x + 1 for x in sg])
        inv = sg_perm.inverse()
        for pi in pis:
            pi_perm = Permutation.from_one_line([x + 1 for x in pi])
            types.append(inv.compose(pi_perm).cycle_type())
    return types


def _coe_types(a, b) -> list[CycleType]:
    """Halved cycle types of the orthogonal targets of all permutations of
    Z_t satisfying the index deltas, with multiplicity."""
    t = len(a)
    dom = barred_domain(t)
    aval = [a[z.index - 1][1 if z.barred else 0] for z in dom]
    bval = [b[z.index - 1][1 if z.barred else 0] for z in dom]
    types = []
    for img in _matchings(aval, bval):
        varpi = Permutation(t, True, tuple(dom[j] for j in img))
        types.append(halved_cycle_type(target_orthogonal(varpi)))
    return types


def correlator_cue(spec: CorrelatorSpec) -> RationalFunction:
    """CUE average of the element product in `spec`, symbolic in N."""
    if len(spec.a) != len(spec.b):
        return RationalFunction.const(0)
    if not spec.a:
        return RationalFunction.const(1)
    total = RationalFunction.const(0)
    for ct in _cue_types(spec.a, spec.b):
        total = total + v_cue(ct)
    return total


def correlator_coe(spec: CorrelatorSpec) -> RationalFunction:
    """COE average of the element product in `spec`, symbolic in N."""
    if len(spec.a) != len(spec.b):
        return RationalFunction.const(0)
    if not spec.a:
        return RationalFunction.const(1)
    total = RationalFunction.const(0)
    for ct in _coe_types(spec.a, spec.b):
        total = total + v_coe(ct)
    return total


def correlator(spec: CorrelatorSpec) -> RationalFunction:
    return correlator_cue(spec) if spec.ensemble == CUE else correlator_coe(spec)


def correlator_value(spec: CorrelatorSpec, n: int) -> Fraction:
    """`correlator` evaluated at a concrete matrix size N = n."""
    if len(spec.a) != len(spec.b):
        return Fraction(0)
    if not spec.a:
        return Fraction(1)
    lookup = v_cue if spec.ensemble == CUE else v_coe
    types = _cue_types(spec.a, spec.b) if spec.ensemble == CUE else \
        _coe_types(spec.a, spec.b)
    cache: dict[CycleType, Fraction] = {}
    total = Fraction(0)
    for ct in types:
        if ct not in cache:
            cache[ct] = lookup(ct).evaluate(n)
        total += cache[ct]
    return total


# -- transport moments ---------------------------------------------------


def _trace_shift(traces: tuple[int, ...]) -> Permutation:
    """The permutation k -> successor of k within its own trace block."""
    mapping = {}
    start = 1
    for n in traces:
        for k in range(start, start + n):
            mapping[k] = start if k == start + n - 1 else k + 1
        start += n
    return Permutation.from_mapping(mapping, sum(traces))


def _cycle_count(p: Permutation) -> int:
    return len(p.cycles())


def moment(spec: MomentSpec) -> Fraction:
    """Exact transport moment at numeric lead sizes, as a closed cycle sum."""
    n = spec.total
    big_n = spec.n1 + spec.n2
    if spec.ensemble == CUE:
        if n > MAX_TOTAL_CUE:
            raise ValueError(f"total trace length {n} exceeds the CUE guard {MAX_TOTAL_CUE}")
        return _moment_cue(spec, big_n)
    if n > MAX_TOTAL_COE:
        raise ValueError(f"total trace length {n} exceeds the COE guard {MAX_TOTAL_COE}")
    return _moment_coe(spec, big_n)


def _lead_sizes(spec: MomentSpec) -> tuple[int, int]:
    """Range sizes for the column (input) and row (output) channel indices."""
    if spec.block == TRANSMISSION:
        return spec.n1, spec.n2
    return spec.n1, spec.n1


def _moment_cue(spec: MomentSpec, big_n: int) -> Fraction:
    n = spec.total
    rho = _trace_shift(spec.traces)
    ncol, nrow = _lead_sizes(spec)
    cache: dict[CycleType, Fraction] = {}
    total = Fraction(0)
    perms = [Permutation.from_one_line([x + 1 for x in p])
             for p in itertools.permutations(range(n))]
    col_weight = {p: Fraction(ncol) ** _cycle_count(rho.compose(p)) for p in perms}
    row_weight = {p: Fraction(nrow) ** _cycle_count(p) for p in perms}
    for sigma in perms:
        inv = sigma.inverse()
        wc = col_weight[sigma]
        for pi in perms:
            ct = inv.compose(pi).cycle_type()
            if ct not in cache:
                cache[ct] = v_cue(ct).evaluate(big_n)
            total += cache[ct] * wc * row_weight[pi]
    return total


def _moment_coe(spec: MomentSpec, big_n: int) -> Fraction:
    n = spec.total
    rho = _trace_shift(spec.traces)
    ncol, nrow = _lead_sizes(spec)
    same_lead = spec.block == REFLECTION
    dom = barred_domain(n)
    # channel variable behind each delta side: column variables 0..n-1 are
    # i_1..i_n, row variables n..2n-1 are o_1..o_n
    def avar(z):
        return (n + z.index - 1) if z.barred else (z.index - 1)

    def bvar(z):
        return (n + z.index - 1) if z.barred else (rho(z.index) - 1)

    cache: dict[CycleType, Fraction] = {}
    total = Fraction(0)
    for img in itertools.permutations(dom):
        varpi = Permutation(n, True, img)
        # index-equality graph on the 2n channel variables
        parent = list(range(2 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for z in dom:
            x, y = find(avar(z)), find(bvar(varpi(z)))
            if x != y:
                parent[x] = y
        comps: dict[int, set[int]] = {}
        for v in range(2 * n):
            comps.setdefault(find(v), set()).add(v)
        weight = Fraction(1)
        for members in comps.values():
            has_col = any(m < n for m in members)
            has_row = any(m >= n for m in members)
            if has_col and has_row:
                weight *= ncol if same_lead else 0
            elif has_col:
                weight *= ncol
            else:
                weight *= nrow
        if weight == 0:
            continue
        ct = halved_cycle_type(target_orthogonal(varpi))
        if ct not in cache:
            cache[ct] = v_coe(ct).evaluate(big_n)
        total += cache[ct] * weight
    return total


def moment_bruteforce(spec: MomentSpec) -> Fraction:
    """Literal channel sum of correlators: the independent oracle."""
    n = spec.total
    if n > MAX_TOTAL_BRUTEFORCE:
        raise ValueError(f"total trace length {n} exceeds the oracle guard "
                         f"{MAX_TOTAL_BRUTEFORCE}")
    if max(spec.n1, spec.n2) > MAX_LEAD_BRUTEFORCE:
        raise ValueError(f"lead sizes exceed the oracle guard {MAX_LEAD_BRUTEFORCE}")
    if not spec.traces:
        return Fraction(1)
    big_n = spec.n1 + spec.n2
    # concrete channel numbers: lead 1 is 1..n1, lead 2 is n1+1..n1+n2
    cols = range(1, spec.n1 + 1)
    rows = range(spec.n1 + 1, big_n + 1) if spec.block == TRANSMISSION else cols
    rho = _trace_shift(spec.traces)
    total = Fraction(0)
    for ivals in itertools.product(cols, repeat=n):
        for ovals in itertools.product(rows, repeat=n):
            a = tuple((ivals[k], ovals[k]) for k in range(n))
            b = tuple((ivals[rho(k + 1) - 1], ovals[k]) for k in range(n))
            total += correlator_value(
                CorrelatorSpec(a, b, spec.ensemble), big_n)
    return total
