import random

import pytest
from hypothesis import given, strategies as st

from cuecoe.perms import (CycleType, Label, Permutation, bar_swap,
                          barred_domain, halved_cycle_type,
                          is_valid_orthogonal_target, plain_domain,
                          target_orthogonal, target_unitary)


def random_barred(t: int, rng: random.Random) -> Permutation:
    dom = list(barred_domain(t))
    img = dom[:]
    rng.shuffle(img)
    return Permutation(t, True, tuple(img))


def test_label_roundtrip():
    assert Label.from_int(3) == Label(3, False)
    assert Label.from_int(-2) == Label(2, True)
    assert Label.from_int(-2).to_int() == -2
    assert Label(4, False).bar == Label(4, True)
    with pytest.raises(ValueError):
        Label.from_int(0)


def test_domains_and_order():
    assert [z.to_int() for z in plain_domain(3)] == [1, 2, 3]
    assert [z.to_int() for z in barred_domain(2)] == [1, -1, 2, -2]
    # linear order: 1 < 1bar < 2 < 2bar
    dom = barred_domain(2)
    assert sorted(dom) == list(dom)


def test_permutation_construction_and_composition():
    p = Permutation.from_cycles([(1, 2, 3)], 3)
    q = Permutation.from_cycles([(1, 2)], 3)
    assert (p * q)(1) == p(q(1)) == p(2) == 3
    assert p.inverse().compose(p).is_identity()
    assert p.cycle_type() == CycleType((3,))
    assert Permutation.parse("(1 2)(3 4)", 4).cycle_type() == CycleType((2, 2))


def test_parse_and_cycle_string():
    p = Permutation.parse("(1 -2)")
    assert p.barred and p.size == 2
    assert Permutation.parse(p.cycle_string()) == p
    with pytest.raises(ValueError):
        Permutation.parse("(1 2")


def test_target_unitary():
    sigma = Permutation.from_cycles([(1, 2)], 3)
    pi = Permutation.from_cycles([(2, 3)], 3)
    assert target_unitary(sigma, pi) == sigma.inverse() * pi


def test_bar_swap_is_fixed_point_free_involution():
    T = bar_swap(3)
    for z in T.domain:
        assert T(z) == z.bar != z
        assert T(T(z)) == z


def test_halved_cycle_type_of_identity_varpi():
    varpi = Permutation.identity(2, barred=True)
    tau = target_orthogonal(varpi)
    assert tau.is_identity()
    assert halved_cycle_type(tau) == CycleType((1, 1))


def test_invalid_orthogonal_target_rejected():
    tau = Permutation.from_cycles([(1, -1)], 1, barred=True)
    assert not is_valid_orthogonal_target(tau)
    with pytest.raises(ValueError):
        halved_cycle_type(tau)


@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_orthogonal_target_is_always_valid(t, rng):
    varpi = random_barred(t, rng)
    tau = target_orthogonal(varpi)
    assert is_valid_orthogonal_target(tau)
    # T*tau is a fixed-point-free involution
    T = bar_swap(t)
    m = T * tau
    for z in tau.domain:
        assert m(z) != z
        assert m(m(z)) == z


@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_orthogonal_target_cycles_mirror_pair(t, rng):
    varpi = random_barred(t, rng)
    tau = target_orthogonal(varpi)
    cycles = {frozenset(c) for c in tau.cycles()}
    for c in cycles:
        mirror = frozenset(z.bar for z in c)
        assert mirror != c
        assert mirror in cycles
    assert halved_cycle_type(tau).total == t
