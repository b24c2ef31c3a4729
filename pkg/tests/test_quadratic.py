"""Quadratic extensions over the cyclotomic base field."""

import random
from fractions import Fraction

import mpmath
import pytest

from rankin.cyclo import CycloNumber
from rankin.quadratic import (IncompatibleExtension, QuadContext, QuadExt,
                              sqrt_rational)


def rational_ctx(s, n, root="plus"):
    return QuadContext(CycloNumber.from_rational(Fraction(s)),
                       CycloNumber.from_rational(Fraction(n)), root)


def test_sqrt_rational():
    assert sqrt_rational(Fraction(49, 4)) == Fraction(7, 2)
    assert sqrt_rational(Fraction(0)) == 0
    assert sqrt_rational(Fraction(2)) is None
    assert sqrt_rational(Fraction(-1)) is None


def test_alpha_satisfies_quadratic():
    ctx = rational_ctx(3, -5)
    alpha = ctx.alpha()
    assert alpha * alpha == alpha * 3 - (-5)
    beta = ctx.beta()
    assert alpha + beta == 3
    assert alpha * beta == -5


def test_ring_axioms_random():
    rng = random.Random(31)
    ctx = rational_ctx(7, 11)
    def rand():
        return QuadExt(ctx, Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)),
                       Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)))
    for _ in range(40):
        a, b, c = rand(), rand(), rand()
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
        assert a - a == QuadExt(ctx, 0)


def test_inverse_and_division():
    rng = random.Random(32)
    ctx = rational_ctx(5, 3)
    for _ in range(30):
        a = QuadExt(ctx, Fraction(rng.randrange(-9, 10)),
                    Fraction(rng.randrange(-9, 10)))
        if a.is_zero():
            continue
        assert a * a.inverse() == QuadExt(ctx, 1)
        assert (a / a) == QuadExt(ctx, 1)
    with pytest.raises(ZeroDivisionError):
        QuadExt(ctx, 0).inverse()


def test_norm_and_conj_root():
    ctx = rational_ctx(4, 1)
    a = QuadExt(ctx, Fraction(2), Fraction(3))
    nrm = a * a.conj_root()
    assert nrm.is_scalar() if isinstance(nrm, QuadExt) else True
    assert a.norm() == (a * a.conj_root()).as_cyclo()


def test_powers():
    ctx = rational_ctx(2, 5)
    alpha = ctx.alpha()
    acc = QuadExt(ctx, 1)
    for k in range(8):
        assert alpha**k == acc
        acc = acc * alpha
    assert alpha**-2 == (alpha**2).inverse()


def test_embedding_matches_quadratic_root():
    ctx = rational_ctx(3, 1)  # x^2 - 3x + 1, roots (3 +- sqrt(5)) / 2
    with mpmath.workdps(40):
        root_plus = ctx.alpha().embed(35)
        want = (3 + mpmath.sqrt(5)) / 2
        assert abs(root_plus._mpc() - want) < mpmath.mpf("1e-30")
        other = QuadContext(CycloNumber.from_rational(3),
                            CycloNumber.from_rational(1), "minus")
        root_minus = other.alpha().embed(35)
        want_minus = (3 - mpmath.sqrt(5)) / 2
        assert abs(root_minus._mpc() - want_minus) < mpmath.mpf("1e-30")


def test_cyclotomic_coefficients():
    s = CycloNumber.zeta(3) + 2
    n = CycloNumber.from_rational(Fraction(1, 2))
    ctx = QuadContext(s, n)
    alpha = ctx.alpha()
    assert alpha * alpha == alpha * s - n
    scaled = alpha * CycloNumber.zeta(12)
    assert (scaled * CycloNumber.zeta(12) ** 11) == alpha


def test_incompatible_contexts():
    a = rational_ctx(3, 1).alpha()
    b = rational_ctx(3, 2).alpha()
    with pytest.raises(IncompatibleExtension):
        a + b
    with pytest.raises(IncompatibleExtension):
        a * b
    plus = rational_ctx(3, 1, "plus").alpha()
    minus = rational_ctx(3, 1, "minus").alpha()
    with pytest.raises(IncompatibleExtension):
        plus * minus


def test_scalar_collapse():
    ctx = rational_ctx(6, 2)
    a = QuadExt(ctx, Fraction(5), 0)
    assert a.is_scalar()
    assert a.as_cyclo() == CycloNumber.from_rational(5)
    b = ctx.alpha() - ctx.alpha()
    assert b.is_scalar() and b.as_cyclo().is_zero()
    with pytest.raises(ValueError):
        ctx.alpha().as_cyclo()
