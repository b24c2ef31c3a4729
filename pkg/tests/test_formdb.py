"""Eigenform records: Hecke recursion, stabilisation, database access."""

import json
from fractions import Fraction

import pytest

from rankin.characters import DirichletCharacter, parse_character_label
from rankin.formdb import DataError, Eigenform, FormDatabase
from rankin.quadratic import QuadExt

TRIV = DirichletCharacter.trivial(1)


def test_database_lists_bundled_forms(db):
    assert db.labels() == ["1.12.a.a", "11.2.a.a"]
    with pytest.raises(DataError):
        db.get("3.4.x.y")


def test_delta_record(delta):
    assert delta.k == 12 and delta.N_f == 1
    assert delta.a_prime(2) == -24
    coeffs = delta.coefficients(30)
    assert coeffs[12] == -370944
    assert delta.q_expansion(20).coeffs[11] == 534612
    # stored eigenvalues match the eta-product expansion
    from rankin.qseries import delta_qexp
    direct = delta_qexp(100)
    for l in [2, 3, 5, 53, 97]:
        assert delta.a_prime(l) == direct.coeffs[l]


def test_level11_record(f11):
    assert f11.k == 2 and f11.N_f == 11
    assert f11.a_prime(2) == -2 and f11.a_prime(97) == -7
    # a_11 = 1 at the bad prime, and a_{11^2} = a_11^2 there
    assert f11.a_prime(11) == 1
    assert f11.a_prime_power(11, 2)[2] == 1


def test_hecke_recursion_and_multiplicativity(delta):
    cs = delta.coefficients(100)
    # a_{p^2} = a_p^2 - p^(k-1) at good primes
    for p in [2, 3, 5, 7]:
        assert cs[p * p] == cs[p] ** 2 - p**11
    # multiplicativity on coprime indices
    assert cs[6] == cs[2] * cs[3]
    assert cs[35] == cs[5] * cs[7]
    assert cs[99] == cs[9] * cs[11]


def test_check_primes_passes_on_bundled_data(delta, f11):
    delta.check_primes(200)
    f11.check_primes(200)


def test_stabilise_rational_roots():
    g = Eigenform("split", 2, 1, TRIV,
                  {2: 1, 3: 4, 5: 2, 7: 0, 11: 3, 13: 1, 17: 2, 19: 5})
    ga = g.stabilise(3, "alpha")
    gb = g.stabilise(3, "beta")
    assert ga.alpha == 3 and ga.beta == 1
    assert gb.alpha == 1 and gb.beta == 3
    assert ga.crystalline and ga.p == 3
    # stabilised q-expansion is f - beta V_3 f
    q = g.q_expansion(20)
    qa = ga.q_expansion(20)
    for n in range(1, 20):
        want = q.coeffs[n] - (ga.beta * q.coeffs[n // 3] if n % 3 == 0 else 0)
        assert qa.coeffs[n] == want


def test_stabilise_irrational_roots(delta):
    d3 = delta.stabilise(3, "alpha")
    assert isinstance(d3.alpha, QuadExt)
    # the roots satisfy x^2 - a_3 x + 3^11 = 0
    assert d3.alpha + d3.beta == 252
    assert d3.alpha * d3.beta == Fraction(3) ** 11
    assert d3.alpha != d3.beta
    # the "beta" branch picks the other embedding of the same quadratic
    d3b = delta.stabilise(3, "beta")
    assert d3b.alpha.embed(30).distance(d3.beta.embed(30)) < 1e-25
    assert d3b.beta.embed(30).distance(d3.alpha.embed(30)) < 1e-25


def test_hecke_quadratic(delta):
    s, n = delta.hecke_quadratic(5)
    assert s == 4830
    assert n == Fraction(5) ** 11


def test_stabilise_twice_rejected(delta):
    d3 = delta.stabilise(3, "alpha")
    with pytest.raises(DataError):
        d3.stabilise(5, "alpha")


def test_base_form_round_trip(delta):
    d5 = delta.stabilise(5, "alpha")
    back = d5.base_form()
    assert back.p is None and back.alpha is None
    assert back.label == delta.label
    assert back.a_prime(5) == delta.a_prime(5)
    assert delta.base_form() is delta


def test_crystalline_validation():
    with pytest.raises(DataError):
        Eigenform("bad", 2, 1, TRIV, {3: 4}, p=3,
                  alpha=Fraction(2), beta=Fraction(2), crystalline=True)
    with pytest.raises(DataError):
        Eigenform("bad2", 2, 1, TRIV, {3: 5}, p=3,
                  alpha=Fraction(3), beta=Fraction(1), crystalline=True)
    ok = Eigenform("ok", 2, 1, TRIV, {3: 4}, p=3,
                   alpha=Fraction(3), beta=Fraction(1), crystalline=True)
    assert ok.crystalline


def test_record_validation_errors():
    with pytest.raises(DataError):
        Eigenform("w", 0, 1, TRIV, {})
    with pytest.raises(DataError):
        Eigenform("n", 2, 0, TRIV, {})
    with pytest.raises(DataError):
        Eigenform("p", 2, 1, TRIV, {}, p=4)
    with pytest.raises(DataError):
        Eigenform("pn", 2, 3, TRIV, {}, p=3)  # p divides the tame level
    with pytest.raises(DataError):
        Eigenform("ap", 2, 1, TRIV, {4: 1})  # composite coefficient key
    with pytest.raises(DataError):
        Eigenform("sc", 2, 1, TRIV, {2: 1.5})  # inexact scalar


def test_nontrivial_nebentypus():
    chi = parse_character_label("9.4")
    f = Eigenform("tw", 3, 9, chi, {2: 1})
    assert f.eps_N.modulus == 9
    assert f.eps_at(2) == chi(2)
    with pytest.raises(DataError):
        Eigenform("twbad", 3, 4, chi, {})  # conductor does not divide the level


def test_conjugate_twists_by_inverse_nebentypus():
    chi = parse_character_label("9.4")
    f = Eigenform("tw", 3, 9, chi, {2: Fraction(5), 5: Fraction(7)})
    fc = f.conjugate()
    assert fc.eps_N == chi.inverse().extend_to(9)
    assert fc.a_prime(2) == Fraction(5) * chi(2).inverse()
    # trivial nebentypus forms are self-conjugate
    g = Eigenform("plain", 2, 1, TRIV, {2: 1})
    assert g.conjugate().a_prime(2) == 1


def test_json_round_trip(delta):
    rec = json.loads(json.dumps(delta.to_json()))
    again = Eigenform.from_json(rec)
    assert again.label == delta.label
    assert again.coefficients(50) == delta.coefficients(50)
    d3 = delta.stabilise(3, "alpha")
    again3 = Eigenform.from_json(json.loads(json.dumps(d3.to_json())))
    assert again3.alpha == d3.alpha
    assert again3.crystalline


def test_weight_char(delta):
    assert delta.weight_char is None
    d3 = delta.stabilise(3, "alpha")
    w = d3.weight_char
    assert w.w == 12 and w.p == 3 and w.fin.is_trivial()
