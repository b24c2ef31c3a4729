"""Shared fixtures: the bundled form database and synthetic records."""

from fractions import Fraction

import pytest

from rankin.characters import DirichletCharacter
from rankin.formdb import Eigenform, FormDatabase


@pytest.fixture(scope="session")
def db() -> FormDatabase:
    return FormDatabase()


@pytest.fixture(scope="session")
def delta(db) -> Eigenform:
    return db.get("1.12.a.a")


@pytest.fixture(scope="session")
def f11(db) -> Eigenform:
    return db.get("11.2.a.a")


def crystalline_record(label: str, k: int, p: int, u: Fraction, a: int) -> Eigenform:
    """A synthetic p-level record with alpha = u p^a, beta = p^(k-1) / alpha."""
    triv = DirichletCharacter.trivial(1)
    alpha = u * Fraction(p) ** a
    beta = Fraction(p) ** (k - 1) / alpha
    return Eigenform(label, k, 1, triv, {p: alpha + beta}, p=p,
                     alpha=alpha, beta=beta, crystalline=True)


def rational_roots_form(label: str = "rational-roots", a3: int = 4) -> Eigenform:
    """A weight-2 record whose Hecke polynomial at 3 splits over the rationals."""
    triv = DirichletCharacter.trivial(1)
    return Eigenform(label, 2, 1, triv, {3: a3}, petersson_norm="1.0")
