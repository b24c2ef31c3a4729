"""Eisenstein-type series against a naive divisor-sum oracle, plus the
identity checkers themselves."""

from fractions import Fraction

import pytest

from rankin.characters import (DirichletCharacter, LocAlgChar,
                               parse_character_label, quadratic_character)
from rankin.cyclo import CycloNumber
from rankin.eisenstein import (VerifyCase, eis_E, eis_F, eis_script, eis_tilde,
                               verify_slice_identity, verify_twist_identity)


def naive_eis_E(k, N, p, prec):
    """Direct a_n = sum_{d|n} d^(k-1) (zeta_N^d + (-1)^k zeta_N^(-d)), p-depleted."""
    zN = CycloNumber.zeta(N)
    sign = 1 if k % 2 == 0 else -1
    out = [CycloNumber.zero(N)] * prec
    for n in range(1, prec):
        if n % p == 0:
            continue
        acc = CycloNumber.zero(N)
        for d in range(1, n + 1):
            if n % d:
                continue
            term = zN**d + (zN ** (N - d % N)) * sign
            acc = acc + term * Fraction(d) ** (k - 1)
        out[n] = acc
    return out


def test_eis_E_matches_naive_oracle():
    for (k, N, p) in [(2, 4, 3), (3, 4, 3), (5, 4, 5), (4, 7, 2)]:
        got = eis_E(k, N, p, 20)
        want = naive_eis_E(k, N, p, 20)
        for n in range(20):
            assert got.coeffs[n] - want[n] == CycloNumber.zero(N), (k, N, p, n)


def test_eis_E_known_small_values():
    f = eis_E(2, 4, 3, 8)
    # a_2 = 1 (zeta_4 + zeta_4^-1) + 2 (zeta_4^2 + zeta_4^-2) = -4
    assert f.coeffs[2] == CycloNumber.from_rational(-4)
    assert f.coeffs[3] == CycloNumber.zero(4)  # depleted
    assert f.coeffs[4] == CycloNumber.from_rational(4)
    assert f.level == 12
    assert f.weight.w == 2 and f.weight.p == 3


def test_eis_F_swaps_the_divisor_roles():
    k, N, p, prec = 4, 4, 3, 25
    E, F = eis_E(k, N, p, prec), eis_F(k, N, p, prec)
    zN = CycloNumber.zeta(N)
    for n in range(1, prec):
        if n % p == 0:
            continue
        acc = CycloNumber.zero(N)
        for d in range(1, n + 1):
            if n % d:
                continue
            term = zN**d + zN ** (N - d % N)
            acc = acc + term * Fraction(n // d) ** (k - 1)
        assert F.coeffs[n] == acc
    # E and F differ (the divisor power sits on opposite factors)
    assert E.first_mismatch(F) is not None


def test_eis_script_specialises_to_E_and_F():
    k1, k2, N, p, prec = 9, 3, 4, 3, 30
    # sigma = k1 - 1 recovers E at weight k1 - k2, sigma = k2 recovers F
    assert eis_script(k1, k2, k1 - 1, N, p, prec) == eis_E(k1 - k2, N, p, prec)
    assert eis_script(k1, k2, k2, N, p, prec) == eis_F(k1 - k2, N, p, prec)


def test_negative_weight_series_are_exact():
    f = eis_E(-2, 4, 3, 10)
    # d^(-3) terms are exact rationals over the cyclotomic field
    z4 = CycloNumber.zeta(4)
    want = (z4 + z4**3) + (z4**2 + z4**2) * Fraction(1, 8)
    assert f.coeffs[2] == want


def test_slice_identity_cases():
    ok = verify_slice_identity(12, 2, 1, 4, 3, 40, flavor="spade")
    assert ok.ok and ok.first_mismatch is None
    d = ok.as_dict()
    assert set(d) == {"case", "params", "prec", "ok", "first_mismatch", "detail"}
    assert d["prec"] == 40
    diamond = verify_slice_identity(12, 2, 1, 4, 3, 40, flavor="diamond")
    assert diamond.ok
    with pytest.raises(ValueError):
        verify_slice_identity(12, 2, 1, 4, 3, 40, flavor="club")


def test_slice_identity_with_finite_parts():
    chi3 = quadratic_character(3)
    kappa1 = LocAlgChar(12, chi3, 3)
    ok = verify_slice_identity(kappa1, 2, 1, 4, 3, 30, flavor="spade")
    assert ok.ok
    chi9 = parse_character_label("9.4")
    tau = LocAlgChar(1, chi9, 3)
    ok2 = verify_slice_identity(10, 3, tau, 4, 3, 30, flavor="diamond")
    assert ok2.ok


def test_twist_identity_case():
    chi = quadratic_character(3)
    case = verify_twist_identity(12, 2, 10, chi, 4, 3, 30)
    assert case.ok and case.first_mismatch is None
    assert case.params["chi"] == "3.2"


def test_twist_series_rejects_trivial_character():
    with pytest.raises(ValueError):
        eis_tilde(12, 2, 10, DirichletCharacter.trivial(3), 4, 3, 20)


def test_verify_case_failure_shape():
    bad = VerifyCase("demo", {"x": 1}, 10, False, 3, "mismatch at q^3")
    d = bad.as_dict()
    assert d["ok"] is False and d["first_mismatch"] == 3


def test_setting_validation():
    with pytest.raises(ValueError):
        eis_E(2, 6, 3, 10)  # p divides N
    with pytest.raises(ValueError):
        eis_E(2, 4, 4, 10)  # p not prime
    with pytest.raises(ValueError):
        eis_E(2, 4, 3, 0)  # empty precision
