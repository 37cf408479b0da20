import pytest
from hypothesis import given, settings, strategies as st

from cuecoe.factorizations import (MonotoneFactorization, Transposition,
                                   canonical_orthogonal_target,
                                   canonical_unitary_target, count_monotone,
                                   count_palindromic, delta_series_o,
                                   delta_series_u, enumerate_monotone,
                                   enumerate_palindromic)
from cuecoe.perms import Permutation
from cuecoe.ratfun import laurent_expand
from cuecoe.weingarten import partitions, v_coe, v_cue


def test_canonical_targets():
    assert canonical_unitary_target((2, 1)).cycle_string() == "(1 2)(3)"
    tau = canonical_orthogonal_target((2,))
    assert tau.barred and tau.cycle_type().parts == (2, 2)


def test_transposition_validation():
    with pytest.raises(ValueError):
        Transposition(2, 2)


def test_monotone_simple_cases():
    tau = canonical_unitary_target((2,))
    [f] = enumerate_monotone(tau, 1)
    assert f.factors == (Transposition(1, 2),)
    assert enumerate_monotone(tau, 2) == []
    assert len(enumerate_monotone(tau, 3)) == 1  # (12)(12)(12)
    assert enumerate_monotone(canonical_unitary_target((1,)), 0)[0].factors == ()


def test_monotone_factorizations_multiply_to_target():
    tau = canonical_unitary_target((3,))
    for f in enumerate_monotone(tau, 4):
        prod = Permutation.identity(3)
        for t in f.factors:
            prod = prod * Permutation.from_cycles([(t.s, t.r)], 3)
        assert prod == tau
        # monotone condition
        ss = [t.s for t in f.factors]
        assert ss == sorted(ss)


def test_count_matches_enumeration_small():
    for t in range(1, 5):
        for part in partitions(t):
            tau = canonical_unitary_target(part)
            for v in range(0, 5):
                assert count_monotone(part, v) == len(enumerate_monotone(tau, v))


def test_palindromic_count_matches_enumeration_small():
    for t in range(1, 3):
        for part in partitions(t):
            tau = canonical_orthogonal_target(part)
            for v in range(0, 5):
                assert count_palindromic(part, v) == len(enumerate_palindromic(tau, v))


def test_delta_series_match_weingarten_expansions():
    for t in range(1, 4):
        for part in partitions(t):
            order = t + 4
            assert delta_series_u(part, order) == laurent_expand(v_cue(part), order)
    for t in range(1, 3):
        for part in partitions(t):
            order = t + 4
            assert delta_series_o(part, order) == laurent_expand(v_coe(part), order)


@given(st.integers(1, 4), st.integers(0, 4))
@settings(deadline=None)
def test_count_never_negative_and_parity(t, v):
    for part in partitions(t):
        n = count_monotone(part, v)
        assert n >= 0
        # transposition count parity is fixed by the target's sign
        sign_parity = (t - len(part)) % 2
        if v % 2 != sign_parity:
            assert n == 0
