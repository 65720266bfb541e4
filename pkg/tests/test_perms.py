import pytest
from hypothesis import given, strategies as st

from grouplab.errors import InputError
from grouplab.perms import Perm, cycle_string, parse_cycles


def perm_strategy(degree: int):
    return st.permutations(range(degree)).map(Perm)


@given(perm_strategy(6), perm_strategy(6), perm_strategy(6))
def test_composition_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(perm_strategy(7))
def test_two_sided_inverse(p):
    ident = Perm.identity(7)
    assert p * p.inverse() == ident
    assert p.inverse() * p == ident


@given(perm_strategy(6), perm_strategy(6))
def test_left_then_right_convention(p, q):
    for x in range(6):
        assert (p * q)(x) == q(p(x))


def test_order_is_lcm_of_cycle_lengths():
    assert Perm.identity(5).order() == 1
    assert parse_cycles("(0 1 2 3)", 4).order() == 4
    assert parse_cycles("(0 1)(2 3 4)", 5).order() == 6


@given(perm_strategy(8))
def test_order_annihilates(p):
    assert (p ** p.order()).is_identity()


def test_power_matches_repeated_product():
    p = parse_cycles("(0 1 2)(3 4)", 5)
    q = Perm.identity(5)
    for k in range(1, 12):
        q = q * p
        assert p ** k == q
    assert p ** -1 == p.inverse()


def test_conjugate_by():
    p = parse_cycles("(0 1 2)", 4)
    g = parse_cycles("(0 3)", 4)
    assert p.conjugate_by(g) == g.inverse() * p * g


def test_cycle_string_round_trip():
    for text in ["()", "(0 1)", "(0 1 2 3)", "(0 2)(1 3)", "(0 1)(2 3 4)"]:
        assert cycle_string(parse_cycles(text, 5)) == text


def test_rejects_non_permutation():
    with pytest.raises(InputError):
        Perm([0, 0, 1])
    with pytest.raises(InputError):
        parse_cycles("(0 1)(1 2)", 3)
    with pytest.raises(InputError):
        parse_cycles("(0 5)", 3)
