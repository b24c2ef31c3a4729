"""Eisenstein-type q-expansions and the identities relating their twists.

All series here are divisor sums

    a_n = sum over d | n of A(d) * B(n/d) * (zeta_N^d + s * zeta_N^(-d)),

with A, B locally algebraic character evaluations, s = +-1 a parity sign,
and support conditions at p (p-depletion of n, or p-coprimality of n/d).
One generic builder assembles coefficients as exact elements of the
cyclotomic field containing zeta_N and the character values.

Four named constructors:

  eis_E(k)        A = char_eval(k-1, .), B = 1, depleted, sign from k
  eis_F(k)        A = 1, B = char_eval(k-1, .), depleted, sign from k
  eis_script      A from sigma-kappa2, B from kappa1-1-sigma, depleted,
                  sign from kappa1-kappa2; specialises to E and F along the
                  two slices sigma = kappa1-1-tau and sigma = kappa2+tau
  eis_tilde       A = d^(j-k2), B = (n/d)^(k1-1-j) chi(n/d)^(-2), NOT
                  depleted but with p never dividing n/d, sign (-1)^(k1-k2);
                  its chi-twist recovers eis_script at sigma = j+chi

verify_slice_identity and verify_twist_identity check the corresponding
coefficientwise equalities exactly, including weight-character metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .arith import is_prime
from .characters import DirichletCharacter, LocAlgChar
from .cyclo import CycloNumber
from .qseries import QExpansion


def _check_setting(N: int, p: int, prec: int) -> None:
    if N < 1:
        raise ValueError(f"level N must be >= 1, got {N}")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if N % p == 0:
        raise ValueError(f"p = {p} must not divide the level N = {N}")
    if prec < 1:
        raise ValueError("q-precision must be at least 1")


def _parity_sign(kappa: LocAlgChar) -> int:
    val = kappa.eval(-1)
    r = val.as_rational()
    if r not in (1, -1):
        raise ArithmeticError(f"parity value {r} is not a sign")
    return int(r)


def _divisor_table(prec: int) -> list[list[int]]:
    divs: list[list[int]] = [[] for _ in range(prec)]
    for d in range(1, prec):
        for n in range(d, prec, d):
            divs[n].append(d)
    return divs


def _power_cache(w: int, prec: int):
    if w >= 0:
        return [n**w for n in range(prec)]
    return [None] + [Fraction(1, n**-w) for n in range(1, prec)]


def _eis_build(
    N: int,
    p: int,
    prec: int,
    on_d: LocAlgChar,
    on_nd: LocAlgChar,
    sign: int,
    deplete: bool,
    inner_coprime: bool,
    weight: LocAlgChar | None,
    level: int | None,
) -> QExpansion:
    big = lcm(N, on_d.fin.order, on_nd.fin.order)
    on_d.fin.build_table()
    on_nd.fin.build_table()
    pow_d = _power_cache(on_d.w, prec)
    pow_nd = _power_cache(on_nd.w, prec)
    step_n = big // N
    divs = _divisor_table(prec)
    coeffs: list = [0] * prec
    for n in range(1, prec):
        if deplete and n % p == 0:
            continue
        terms: dict[int, Fraction] = {}
        for d in divs[n]:
            m = n // d
            if inner_coprime and m % p == 0:
                continue
            t1 = on_d.value_log_int(d)
            if t1 is None:
                continue
            t2 = on_nd.value_log_int(m)
            if t2 is None:
                continue
            rat = pow_d[d] * pow_nd[m]
            t = t1 + t2
            e0 = t.numerator * (big // t.denominator)
            ep = (e0 + d * step_n) % big
            em = (e0 - d * step_n) % big
            terms[ep] = terms.get(ep, 0) + rat
            if sign == 1:
                terms[em] = terms.get(em, 0) + rat
            else:
                terms[em] = terms.get(em, 0) - rat
        coeffs[n] = CycloNumber.from_zeta_powers(
            big, {e: Fraction(c) for e, c in terms.items()}
        )
    return QExpansion(coeffs, prec, weight, level)


def eis_E(k, N: int, p: int, prec: int) -> QExpansion:
    """Depleted Eisenstein series with the divisor character on d."""
    kappa = LocAlgChar.of(k, p)
    _check_setting(N, p, prec)
    return _eis_build(
        N, p, prec,
        on_d=kappa.shift(-1),
        on_nd=LocAlgChar(0, DirichletCharacter.trivial(1), p),
        sign=_parity_sign(kappa),
        deplete=True,
        inner_coprime=False,
        weight=kappa,
        level=N * p,
    )


def eis_F(k, N: int, p: int, prec: int) -> QExpansion:
    """Depleted Eisenstein series with the divisor character on n/d."""
    kappa = LocAlgChar.of(k, p)
    _check_setting(N, p, prec)
    return _eis_build(
        N, p, prec,
        on_d=LocAlgChar(0, DirichletCharacter.trivial(1), p),
        on_nd=kappa.shift(-1),
        sign=_parity_sign(kappa),
        deplete=True,
        inner_coprime=False,
        weight=kappa,
        level=N * p,
    )


def eis_script(kappa1, kappa2, sigma, N: int, p: int, prec: int) -> QExpansion:
    """The three-parameter family interpolating eis_E and eis_F.

    a_n = sum_{d|n} char_eval(sigma-kappa2, d) char_eval(kappa1-1-sigma, n/d)
          (zeta_N^d + char_eval(kappa1-kappa2, -1) zeta_N^(-d)),  p not | n.
    """
    _check_setting(N, p, prec)
    k1 = LocAlgChar.of(kappa1, p)
    k2 = LocAlgChar.of(kappa2, p)
    sg = LocAlgChar.of(sigma, p)
    return _eis_build(
        N, p, prec,
        on_d=sg - k2,
        on_nd=k1.shift(-1) - sg,
        sign=_parity_sign(k1 - k2),
        deplete=True,
        inner_coprime=False,
        weight=k1 - k2,
        level=N * p,
    )


def eis_tilde(k1: int, k2: int, j: int, chi: DirichletCharacter,
              N: int, p: int, prec: int) -> QExpansion:
    """Undepleted auxiliary series whose chi-twist lands on eis_script.

    a_n = sum over d | n with p not dividing n/d of
          d^(j-k2) (n/d)^(k1-1-j) chi(n/d)^(-2) ((-1)^(k1-k2)-signed pair).
    """
    _check_setting(N, p, prec)
    if chi.primitive_part().is_trivial():
        raise ValueError("the auxiliary twist series needs a non-trivial character")
    fin = LocAlgChar(0, chi, p).fin  # validates p-power conductor, primitivises
    return _eis_build(
        N, p, prec,
        on_d=LocAlgChar(j - k2, DirichletCharacter.trivial(1), p),
        on_nd=LocAlgChar(k1 - 1 - j, (fin**-2), p),
        sign=1 if (k1 - k2) % 2 == 0 else -1,
        deplete=False,
        inner_coprime=True,
        weight=LocAlgChar(k1 - k2, fin**-2, p),
        level=N * fin.conductor,
    )


# -- identity verification -------------------------------------------------


@dataclass
class VerifyCase:
    """Outcome of one identity check: parameters, precision, result."""

    name: str
    params: dict
    prec: int
    ok: bool
    first_mismatch: int | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "case": self.name,
            "params": self.params,
            "prec": self.prec,
            "ok": self.ok,
            "first_mismatch": self.first_mismatch,
            "detail": self.detail,
        }


def _weight_label(w: LocAlgChar | None) -> str:
    return repr(w) if w is not None else "untagged"


def _compare(name: str, params: dict, lhs: QExpansion, rhs: QExpansion) -> VerifyCase:
    prec = min(lhs.prec, rhs.prec)
    mismatch = lhs.first_mismatch(rhs)
    if mismatch is not None:
        return VerifyCase(name, params, prec, False, mismatch,
                          f"coefficients differ first at q^{mismatch}")
    if lhs.weight is not None and rhs.weight is not None and lhs.weight != rhs.weight:
        return VerifyCase(name, params, prec, False, None,
                          f"weights differ: {_weight_label(lhs.weight)} vs "
                          f"{_weight_label(rhs.weight)}")
    return VerifyCase(name, params, prec, True)


def verify_slice_identity(kappa1, kappa2, tau, N: int, p: int, prec: int,
                          flavor: str = "spade") -> VerifyCase:
    """theta^tau E (spade) or theta^tau F (diamond) against eis_script.

    spade:   theta^tau E^[p]_(kappa1-kappa2-2tau) = script(kappa1, kappa2, kappa1-1-tau)
    diamond: theta^tau F^[p]_(kappa1-kappa2-2tau) = script(kappa1, kappa2, kappa2+tau)
    """
    k1 = LocAlgChar.of(kappa1, p)
    k2 = LocAlgChar.of(kappa2, p)
    tw = LocAlgChar.of(tau, p)
    kk = k1 - k2 - tw.scale(2)
    params = {
        "kappa1": repr(k1), "kappa2": repr(k2), "tau": repr(tw),
        "N": N, "p": p, "flavor": flavor,
    }
    if flavor == "spade":
        lhs = eis_E(kk, N, p, prec).theta_twist(tw)
        rhs = eis_script(k1, k2, k1.shift(-1) - tw, N, p, prec)
    elif flavor == "diamond":
        lhs = eis_F(kk, N, p, prec).theta_twist(tw)
        rhs = eis_script(k1, k2, k2 + tw, N, p, prec)
    else:
        raise ValueError(f"flavor must be 'spade' or 'diamond', got {flavor!r}")
    return _compare(f"slice-{flavor}", params, lhs, rhs)


def verify_twist_identity(k1: int, k2: int, j: int, chi: DirichletCharacter,
                          N: int, p: int, prec: int) -> VerifyCase:
    """eis_script(k1, k2, j+chi) = theta^chi(eis_tilde(k1, k2, j, chi))."""
    chi_w = LocAlgChar(0, chi, p)
    params = {"k1": k1, "k2": k2, "j": j, "chi": chi_w.fin.label, "N": N, "p": p}
    lhs = eis_script(LocAlgChar.of(k1, p), LocAlgChar.of(k2, p),
                     LocAlgChar(j, chi, p), N, p, prec)
    rhs = eis_tilde(k1, k2, j, chi, N, p, prec).theta_twist(chi_w)
    return _compare("twist", params, lhs, rhs)
