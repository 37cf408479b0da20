import itertools
from fractions import Fraction

import pytest

from cuecoe.correlator import (CorrelatorSpec, MomentSpec, correlator,
                               correlator_coe, correlator_cue,
                               correlator_value, moment, moment_bruteforce)
from cuecoe.ratfun import Poly, RationalFunction

N = Poly.N()


def test_zero_correlator():
    assert correlator_cue(CorrelatorSpec(((1, 2),), ((2, 1),))).is_zero()


def test_single_element_cue():
    assert correlator_cue(CorrelatorSpec(((1, 1),), ((1, 1),))) == RationalFunction(1, N)


def test_two_element_cue():
    spec = CorrelatorSpec(((1, 2), (3, 2)), ((1, 2), (3, 2)))
    want = RationalFunction(1, N * N - 1) - RationalFunction(1, N * (N * N - 1))
    assert correlator_cue(spec) == want


def test_coe_elements():
    assert correlator_coe(CorrelatorSpec(((1, 2),), ((1, 2),))) == RationalFunction(1, N + 1)
    assert correlator_coe(CorrelatorSpec(((1, 1),), ((1, 1),))) == RationalFunction(2, N + 1)


def test_mismatched_counts_vanish():
    assert correlator(CorrelatorSpec(((1, 1),), (), "cue")).is_zero()
    assert correlator(CorrelatorSpec(((1, 1),), (), "coe")).is_zero()


def test_empty_product_is_one():
    assert correlator(CorrelatorSpec((), (), "cue")) == RationalFunction(1)


def test_correlator_value_matches_symbolic():
    spec = CorrelatorSpec(((1, 2), (3, 2)), ((1, 2), (3, 2)))
    assert correlator_value(spec, 5) == correlator_cue(spec).evaluate(5)


def test_cue_relabeling_invariance():
    # permuting the factors of either group leaves the average unchanged
    a = ((1, 2), (2, 1), (3, 3))
    b = ((1, 2), (2, 1), (3, 3))
    base = correlator_cue(CorrelatorSpec(a, b))
    for pa in itertools.permutations(a):
        for pb in itertools.permutations(b):
            assert correlator_cue(CorrelatorSpec(pa, pb)) == base


def test_coe_row_column_symmetry():
    # W is symmetric, so swapping row/column inside a factor changes nothing
    base = correlator_coe(CorrelatorSpec(((1, 2), (2, 3)), ((1, 2), (2, 3))))
    swapped = correlator_coe(CorrelatorSpec(((2, 1), (2, 3)), ((1, 2), (3, 2))))
    assert base == swapped


def test_m1_closed_forms():
    for n1 in range(1, 5):
        for n2 in range(1, 5):
            cue = moment(MomentSpec((1,), n1, n2, "transmission", "cue"))
            coe = moment(MomentSpec((1,), n1, n2, "transmission", "coe"))
            assert cue == Fraction(n1 * n2, n1 + n2)
            assert coe == Fraction(n1 * n2, n1 + n2 + 1)
    assert moment(MomentSpec((1,), 1, 1)) == Fraction(1, 2)


def test_moment_matches_bruteforce():
    for ens in ("cue", "coe"):
        for traces in [(1,), (2,), (1, 1)]:
            for n1 in range(1, 4):
                for n2 in range(1, 4):
                    for block in ("transmission", "reflection"):
                        s = MomentSpec(traces, n1, n2, block, ens)
                        assert moment(s) == moment_bruteforce(s)


def test_reflection_m1():
    # Tr r^dagger r + Tr t^dagger t = N1 exactly, by unitarity
    for ens in ("cue", "coe"):
        for n1, n2 in [(1, 1), (2, 1), (2, 3)]:
            r = moment(MomentSpec((1,), n1, n2, "reflection", ens))
            t = moment(MomentSpec((1,), n1, n2, "transmission", ens))
            assert r + t == n1


def test_guards():
    with pytest.raises(ValueError):
        moment(MomentSpec((9,), 2, 2, "transmission", "cue"))
    with pytest.raises(ValueError):
        moment(MomentSpec((7,), 2, 2, "transmission", "coe"))
    with pytest.raises(ValueError):
        moment_bruteforce(MomentSpec((4,), 2, 2))
    with pytest.raises(ValueError):
        moment_bruteforce(MomentSpec((1,), 5, 2))
    with pytest.raises(ValueError):
        MomentSpec((0,), 1, 1)
    with pytest.raises(ValueError):
        CorrelatorSpec(((0, 1),), ((1, 1),))
