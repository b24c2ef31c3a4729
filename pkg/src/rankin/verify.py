"""Parameter-grid runners for the identity verification suites.

Three suites, each returning a list of VerifyCase records:

  slice  theta^tau E / theta^tau F against the three-parameter family,
         over an integer grid plus a fixed set of triples whose weight
         characters carry finite parts of conductor 3, 9 and 5
  twist  the j + chi evaluation of the family against the chi-twist of
         the auxiliary series, over the critical range
  euler  convolution-table Dirichlet coefficients at prime powers against
         the power-series inverse of the degree-4 local polynomial

A suite passes when every case has ok = True; runners never raise on a
mismatch, they report it.
"""

from __future__ import annotations

from math import gcd

from .characters import (DirichletCharacter, LocAlgChar, all_characters,
                         quadratic_character)
from .eisenstein import VerifyCase, verify_slice_identity, verify_twist_identity
from .formdb import Eigenform
from .lfunc import dirichlet_coefficients, full_level, local_inverse_coefficients


def character_of_order(modulus: int, order: int) -> DirichletCharacter:
    """The primitive character mod `modulus` of the given order with the
    smallest Conrey index; deterministic pick for suite grids."""
    found = [chi for chi in all_characters(modulus)
             if chi.conductor == modulus and chi.order == order]
    if not found:
        raise ValueError(f"no primitive character mod {modulus} of order {order}")
    return min(found, key=lambda chi: chi.conrey_index)


def primitive_characters_of_conductor(c: int) -> list[DirichletCharacter]:
    """All primitive characters of conductor c, sorted by Conrey index."""
    found = [chi for chi in all_characters(c) if chi.conductor == c]
    return sorted(found, key=lambda chi: chi.conrey_index)


def slice_grid_cases(k1s, k2s, taus, N: int = 4, p: int = 3,
                     prec: int = 200) -> list[VerifyCase]:
    """Both slice identities over the integer grid.

    Combinations are restricted to 1 <= k2 <= k1 - 2 and
    0 <= tau <= min(5, k1 - k2); out-of-range requests are skipped, so the
    full rectangular product can be passed in.
    """
    cases = []
    for k1 in k1s:
        for k2 in k2s:
            if not 1 <= k2 <= k1 - 2:
                continue
            for tau in taus:
                if not 0 <= tau <= min(5, k1 - k2):
                    continue
                for flavor in ("spade", "diamond"):
                    cases.append(verify_slice_identity(
                        k1, k2, tau, N, p, prec, flavor=flavor))
    return cases


def finite_slice_cases(N: int = 4, prec: int = 200) -> list[VerifyCase]:
    """Slice identities with finite weight-character parts.

    Fixed triples carrying characters of conductor 3 and 9 at p = 3 and of
    conductor 5 at p = 5, on the weights, on the twist exponent, and on
    several at once.
    """
    chi3 = quadratic_character(3)
    chi9 = character_of_order(9, 3)
    chi5 = quadratic_character(5)
    t3 = lambda w, fin=None: LocAlgChar(w, fin or DirichletCharacter.trivial(1), 3)
    t5 = lambda w, fin=None: LocAlgChar(w, fin or DirichletCharacter.trivial(1), 5)
    triples = [
        (3, t3(12, chi3), t3(2), t3(0)),
        (3, t3(12), t3(2, chi3), t3(1)),
        (3, t3(10, chi9), t3(3), t3(1)),
        (3, t3(12, chi3), t3(2, chi9), t3(2)),
        (3, t3(8), t3(1), t3(1, chi3)),
        (3, t3(9, chi9), t3(2), t3(2, chi9)),
        (5, t5(10, chi5), t5(2), t5(0)),
        (5, t5(8), t5(1, chi5), t5(1)),
        (5, t5(9, chi5), t5(2, chi5), t5(1, chi5)),
    ]
    cases = []
    for p, k1, k2, tau in triples:
        for flavor in ("spade", "diamond"):
            cases.append(verify_slice_identity(k1, k2, tau, N, p, prec,
                                               flavor=flavor))
    return cases


def twist_grid_cases(pairs=((12, 2), (8, 3)), conductors=(3, 9),
                     N: int = 4, prec: int = 100) -> list[VerifyCase]:
    """The twist identity over the critical range, all primitive characters
    of the given prime-power conductors."""
    cases = []
    for k1, k2 in pairs:
        for cond in conductors:
            p = min(l for l in range(2, cond + 1) if cond % l == 0)
            for chi in primitive_characters_of_conductor(cond):
                for j in range(k2, k1):
                    cases.append(verify_twist_identity(k1, k2, j, chi, N, p, prec))
    return cases


def euler_cases(f1: Eigenform, f2: Eigenform, chi: DirichletCharacter,
                l_max: int = 97, power_bound: int = 10**4) -> list[VerifyCase]:
    """Convolution coefficients at l^r against the local inverse expansion.

    One case per prime l <= l_max coprime to both levels, covering every
    exponent with l^r <= power_bound; equality is exact.
    """
    table = dirichlet_coefficients(f1, f2, chi, power_bound).collapse()
    bad = full_level(f1) * full_level(f2)
    cases = []
    for l in range(2, l_max + 1):
        if any(l % q == 0 for q in range(2, l)) or gcd(l, bad) != 1:
            continue
        r_max = 0
        while l ** (r_max + 1) <= power_bound:
            r_max += 1
        inv = local_inverse_coefficients(f1, f2, l, chi, r_max)
        params = {"f1": f1.label, "f2": f2.label, "chi": chi.label,
                  "l": l, "r_max": r_max}
        mismatch = None
        for r in range(1, r_max + 1):
            if not table[l**r] == inv[r]:
                mismatch = l**r
                break
        if mismatch is None:
            cases.append(VerifyCase("euler", params, power_bound, True))
        else:
            cases.append(VerifyCase(
                "euler", params, power_bound, False, mismatch,
                f"convolution and Euler routes differ at n = {mismatch}"))
    return cases


def all_pass(cases: list[VerifyCase]) -> bool:
    return all(c.ok for c in cases)
