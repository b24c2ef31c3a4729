"""Dirichlet characters, Gauss sums, and locally algebraic characters."""

import random
from fractions import Fraction
from math import gcd

import pytest

from rankin.arith import euler_phi
from rankin.characters import (DirichletCharacter, LocAlgChar, all_characters,
                               char_eval, gauss_sum, parse_character_label,
                               primitive_characters, quadratic_character)
from rankin.cyclo import CycloNumber


def test_all_characters_count_and_multiplicativity():
    rng = random.Random(21)
    for m in [3, 4, 5, 8, 9, 12]:
        chars = all_characters(m)
        assert len(chars) == euler_phi(m)
        for chi in chars:
            for _ in range(10):
                a, b = rng.randrange(1, 3 * m), rng.randrange(1, 3 * m)
                if gcd(a * b, m) != 1:
                    continue
                assert chi(a * b) == chi(a) * chi(b)


def test_character_vanishes_off_units():
    chi = quadratic_character(3)
    assert chi(3).is_zero()
    assert chi(6).is_zero()
    assert chi(4) == CycloNumber.one()


def test_orthogonality():
    for m in [5, 8, 9]:
        for chi in all_characters(m):
            total = sum((chi(a) for a in range(1, m + 1)), CycloNumber.zero())
            if chi.is_trivial():
                assert total == CycloNumber.from_rational(euler_phi(m))
            else:
                assert total.is_zero()


def test_order_and_powers():
    chi = parse_character_label("9.2")
    d = chi.order
    assert d > 1
    assert (chi**d).is_trivial()
    assert not (chi**(d - 1)).is_trivial()
    assert (chi * chi.inverse()).is_trivial()


def test_conductor_and_primitive_part():
    chi3 = quadratic_character(3)
    lifted = chi3.extend_to(9)
    assert lifted.modulus == 9
    assert lifted.conductor == 3
    assert not lifted.is_primitive()
    prim = lifted.primitive_part()
    assert prim.modulus == 3 and prim.is_primitive()
    assert prim == chi3
    for a in [1, 2, 4, 5, 7, 8]:
        assert lifted(a) == chi3(a)


def test_conrey_label_round_trip():
    for m in [3, 5, 8, 9, 12, 25]:
        for chi in all_characters(m):
            lbl = chi.label
            if chi.modulus == 1:
                assert lbl == "triv"
                continue
            again = parse_character_label(lbl)
            assert again == chi
    assert parse_character_label("triv").is_trivial()
    assert parse_character_label("quad3") == quadratic_character(3)


def test_quadratic_character_unique_or_error():
    for m in [3, 4, 5, 7, 11]:
        chi = quadratic_character(m)
        assert chi.order == 2 and chi.is_primitive()
    with pytest.raises(ValueError):
        quadratic_character(8)  # two primitive quadratic characters


def test_parity():
    assert quadratic_character(3).parity() == -1
    assert quadratic_character(5).parity() == 1
    chi = parse_character_label("9.2")
    assert chi(9 - 1) == chi(-1 % 9)


def test_gauss_sum_conjugate_product():
    # G(chi) G(chi_bar) = chi(-1) * conductor, exactly
    for c in [3, 5, 7, 9]:
        for chi in primitive_characters(c):
            g = gauss_sum(chi)
            gbar = gauss_sum(chi.inverse())
            want = chi(-1 % c) * Fraction(c)
            assert g * gbar == want


def test_gauss_sum_absolute_value():
    for c in [3, 5, 9]:
        for chi in primitive_characters(c):
            g = gauss_sum(chi)
            sq = (g * g.conj()).as_rational()
            assert sq == c


def test_quadratic_gauss_sum_signs():
    # G(quad5)^2 = 5 and G(quad3)^2 = -3
    g5 = gauss_sum(quadratic_character(5))
    assert (g5 * g5).as_rational() == 5
    g3 = gauss_sum(quadratic_character(3))
    assert (g3 * g3).as_rational() == -3


def test_loc_alg_char_eval():
    chi = quadratic_character(3)
    kappa = LocAlgChar(4, chi, 3)
    assert kappa.eval(2) == chi(2) * Fraction(16)
    assert kappa.eval(Fraction(1, 2)) == chi(2).inverse() * Fraction(1, 16)
    with pytest.raises(ValueError):
        kappa.eval(6)  # not a unit at 3
    with pytest.raises(ValueError):
        kappa.eval(0)


def test_loc_alg_char_algebra():
    chi = quadratic_character(3)
    a = LocAlgChar(2, chi, 3)
    b = LocAlgChar(5, DirichletCharacter.trivial(1), 3)
    s = a + b
    assert s.w == 7 and s.fin == chi
    assert (a - a).is_algebraic()
    assert a.scale(2).w == 4 and a.scale(2).fin.is_trivial()
    assert a.shift(3).w == 5 and a.shift(3).fin == chi
    assert a.conductor_exponent == 1
    assert LocAlgChar(0, parse_character_label("9.2"), 3).conductor_exponent == 2


def test_loc_alg_char_requires_p_power_conductor():
    with pytest.raises(ValueError):
        LocAlgChar(1, quadratic_character(5), 3)
    # induced characters are primitivised before the check
    ok = LocAlgChar(1, quadratic_character(3).extend_to(9), 3)
    assert ok.fin.modulus == 3


def test_char_eval_plain_int():
    assert char_eval(3, Fraction(2)) == CycloNumber.from_rational(8)
    kappa = LocAlgChar(2, quadratic_character(3), 3)
    assert char_eval(kappa, 5) == kappa.eval(5)
