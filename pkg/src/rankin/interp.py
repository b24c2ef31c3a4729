"""p-local interpolation factors and assembled predicted period values.

The predicted value of the period attached to a pair of p-level eigenforms
at an evaluation point j + chi factors into four blocks:

    euler_ratio   exact p-local Euler brackets, divided by E(f1) E*(f1)
                  where E(f1) = 1 - beta1/(p alpha1), E*(f1) = 1 - beta1/alpha1
    gauss_block   Gauss sums of the twisting character(s), exact cyclotomic
    archimedean   (j-1)! (j-k2)! i^(k1-k2) / (pi^(2j+1-k2) 2^(2j+k1-k2) <f1,f1>)
                  with <f1,f1> the Petersson norm of the underlying newform,
                  ingested as a decimal string, never computed
    lvalue        the imprimitive Rankin-Selberg L-value, either supplied or
                  evaluated by series summation when j lies in the region of
                  absolute convergence

Two regimes are covered.  When both forms are crystalline (p-stabilisations
of newforms of level coprime to p), the pair factor E(f1, f2, j + chi) is

    (1 - p^(j-1)/(a1 a2)) (1 - p^(j-1)/(a1 b2)) (1 - b1 a2/p^j) (1 - b1 b2/p^j)

for trivial chi, and G(chi)^2 (p^(2j-2) / (a1^2 a2 b2))^r for chi of
conductor p^r > 1 (the exponent is evaluated at the integer j of the
evaluation point), and the L-value is that of the two underlying newforms.
When the second form instead has a non-trivial character eps_{2,p} at p,
the prefactor becomes

    (p^(j-1)/(a1 a2))^r G(chi) * (p^(j-1)/(a1 b2))^(r') G(chi')

with chi' = chi eps_{2,p}^(-1) of conductor p^(r'), the surrogate second
root b2 = p^(k2-1) eps_{2,N}(p) / a2, and the L-value taken against the
p-level form itself.  Both regimes require that neither evaluation hits a
vanishing denominator and, in the second, that neither chi nor chi' is
trivial.

The trivial-character pair factor is computed through the symmetric
functions of (a2, b2), writing

    (1 - A/a2)(1 - A/b2) = 1 - A s2/n2 + A^2/n2,
    (1 - B a2)(1 - B b2) = 1 - B s2 + B^2 n2

with s2 = a2 + b2 and n2 = a2 b2, so the value stays exact even when both
stabilisations are irrational quadratics over different Hecke fields.  The
two-root prefactor of the second regime cannot always be paired up this way;
when its exact assembly would mix roots of different Hecke polynomials the
module falls back to high-precision numerics and flags the factor as
inexact in the output.

The Atkin-Lehner pseudo-eigenvalue of the first form's underlying newform
does not appear anywhere above, and deliberately so: in the derivation of
the formula it enters once inverted, when the convolution integral is
unfolded against the dual eigenform, and once directly, when the resulting
period is rewritten in terms of the chosen Petersson norm.  The two
occurrences cancel, so the assembled prediction never depends on it and
eigenform records carry no such field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import mpmath

from .characters import DirichletCharacter, gauss_sum
from .cyclo import ComplexAP, CycloNumber
from .formdb import DataError, Eigenform
from .jsonio import normalize_exact
from .lfunc import evaluate_L
from .qseries import coeff_is_zero
from .quadratic import IncompatibleExtension, QuadExt


def _stabilisation_roots(f: Eigenform):
    if f.p is None or f.alpha is None or f.beta is None:
        raise DataError(f"{f.label}: not a stabilised record (alpha/beta missing)")
    if coeff_is_zero(f.alpha):
        raise DataError(f"{f.label}: alpha = 0 (infinite slope)")
    return f.alpha, f.beta


def _trace_and_norm(f: Eigenform):
    """(alpha + beta, alpha * beta) of a crystalline record, as exact scalars."""
    a, b = _stabilisation_roots(f)
    if isinstance(a, QuadExt):
        return a.ctx.s, a.ctx.n
    return normalize_exact(a + b), normalize_exact(a * b)


def _p_conductor_exponent(chi: DirichletCharacter, p: int) -> int:
    """r with conductor(chi) = p^r >= p, for a primitive chi."""
    c, r = chi.modulus, 0
    while c % p == 0:
        c //= p
        r += 1
    if c != 1 or r == 0:
        raise DataError(
            f"character conductor {chi.modulus} is not a positive power of p = {p}"
        )
    return r


def euler_E(f1: Eigenform):
    """1 - beta/(p alpha), exact in the coefficient field of the roots."""
    a, b = _stabilisation_roots(f1)
    return normalize_exact(1 - (b * Fraction(1, f1.p)) / a)


def euler_Estar(f1: Eigenform):
    """1 - beta/alpha, exact; zero exactly when the stabilisation is non-regular."""
    a, b = _stabilisation_roots(f1)
    return normalize_exact(1 - (b * Fraction(1)) / a)


def euler_E_pair(f1: Eigenform, f2: Eigenform, j: int, chi: DirichletCharacter):
    """The pair factor of two crystalline forms at j + chi, exact.

    chi trivial gives the four-bracket product, computed through the
    symmetric functions of (alpha2, beta2); chi of conductor p^r > 1 gives
    G(chi)^2 (p^(2j-2) / (alpha1^2 alpha2 beta2))^r.
    """
    a1, b1 = _stabilisation_roots(f1)
    p = f1.p
    if f2.p != p:
        raise DataError(
            f"stabilisation primes differ: {f1.label} has p = {p}, "
            f"{f2.label} has p = {f2.p}"
        )
    a2, b2 = _stabilisation_roots(f2)
    chi = chi.primitive_part()
    if chi.is_trivial():
        big_a = Fraction(p) ** (j - 1) / a1
        big_b = b1 * Fraction(1, p**j)
        if not isinstance(a2, QuadExt) and coeff_is_zero(b2):
            # one-root degeneration: only the alpha2 brackets survive
            val = (1 - big_a / a2) * (1 - big_b * a2)
            return normalize_exact(val)
        s2, n2 = _trace_and_norm(f2)
        first = 1 - (big_a * s2) / n2 + (big_a * big_a) / n2
        second = 1 - big_b * s2 + (big_b * big_b) * n2
        return normalize_exact(first * second)
    _, n2 = _trace_and_norm(f2)
    r = _p_conductor_exponent(chi, p)
    g = gauss_sum(chi)
    core = Fraction(p) ** (2 * j - 2) / (a1 * a1 * n2)
    return normalize_exact(g * g * core**r)


class InterpInput:
    """Validated inputs of the predicted-value formulas, with derived data.

    Checks the standing hypotheses (crystalline regular first form, critical
    range 1 <= k2 <= j <= k1-1, p-power conductor) and derives the working
    prime, the regime, the second pair of roots (the surrogate
    beta2 = p^(k2-1) eps_{2,N}(p)/alpha2 in the non-crystalline regime), the
    shifted character chi' = chi eps_{2,p}^(-1), and the conductor exponents
    r, r' of chi and chi'.
    """

    __slots__ = ("f1", "f2", "j", "chi", "p", "regime", "alpha2", "beta2",
                 "chi_prime", "r", "r_prime")

    def __init__(self, f1: Eigenform, f2: Eigenform, j: int,
                 chi: DirichletCharacter):
        if not f1.crystalline:
            raise DataError(f"{f1.label}: first form must be crystalline (stabilise it first)")
        a1, b1 = _stabilisation_roots(f1)
        if a1 == b1:
            raise DataError(f"{f1.label}: alpha = beta (non-regular stabilisation)")
        p = f1.p
        k1, k2 = f1.k, f2.k
        if not (1 <= k2 <= j <= k1 - 1):
            raise DataError(
                f"j = {j} lies outside the critical range {k2} <= j <= {k1 - 1}"
            )
        chi = chi.primitive_part()
        if not chi.is_trivial():
            _p_conductor_exponent(chi, p)
        if f2.p != p:
            raise DataError(
                f"{f2.label}: second form must be a p-level record at p = {p} "
                f"(stabilise it or supply a U_p eigenform)"
            )
        if f2.crystalline:
            regime = "crystalline"
            alpha2, beta2 = _stabilisation_roots(f2)
        else:
            regime = "noncrystalline"
            if f2.alpha is None:
                raise DataError(f"{f2.label}: no U_p eigenvalue stored")
            if coeff_is_zero(f2.alpha):
                raise DataError(f"{f2.label}: alpha = 0 (infinite slope)")
            alpha2 = f2.alpha
            beta2 = normalize_exact(
                p ** (k2 - 1) * f2.eps_tame_p() / alpha2
            )
        eps2p = f2.eps_p if f2.eps_p is not None else DirichletCharacter.trivial(1)
        chi_prime = (chi * eps2p.inverse()).primitive_part()
        self.f1 = f1
        self.f2 = f2
        self.j = j
        self.chi = chi
        self.p = p
        self.regime = regime
        self.alpha2 = alpha2
        self.beta2 = beta2
        self.chi_prime = chi_prime
        self.r = 0 if chi.is_trivial() else _p_conductor_exponent(chi, p)
        self.r_prime = (0 if chi_prime.is_trivial()
                        else _p_conductor_exponent(chi_prime, p))

    def __repr__(self):
        return (f"InterpInput({self.f1.label} x {self.f2.label}, j={self.j}, "
                f"chi={self.chi.label}, regime={self.regime})")


@dataclass
class InterpResult:
    """A dissected predicted value: named factors, exactness flags, product."""

    regime: str
    factors: dict[str, ComplexAP]
    exact: dict[str, bool]
    total: ComplexAP
    digits: int
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out: dict = {}
        for name in ("euler_ratio", "archimedean", "gauss_block", "lvalue"):
            re, im = self.factors[name].to_strings()
            out[name] = {"re": re, "im": im}
        re, im = self.total.to_strings()
        out["total"] = {"re": re, "im": im}
        out["regime"] = self.regime
        out["exact"] = {k: self.exact[k] for k in sorted(self.exact)}
        out["digits"] = self.digits
        out["warnings"] = list(self.warnings)
        return out


def _embed_scalar(x, digits: int) -> ComplexAP:
    if isinstance(x, ComplexAP):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexAP.from_rational(x, digits)
    return x.embed(digits)


def _euler_denominator(f1: Eigenform):
    den = normalize_exact(euler_E(f1) * euler_Estar(f1))
    if coeff_is_zero(den):
        raise DataError(
            f"{f1.label}: non-regular stabilisation (E(f1) E*(f1) = 0)"
        )
    return den


def _archimedean_factor(f1: Eigenform, k2: int, j: int, digits: int,
                        petersson) -> ComplexAP:
    norm_text = petersson if petersson is not None else f1.petersson_norm
    if norm_text is None:
        raise DataError(
            f"{f1.label}: petersson_norm missing (supply a decimal string)"
        )
    k1 = f1.k
    rot = CycloNumber.zeta(4) ** ((k1 - k2) % 4)
    with mpmath.workdps(digits + 10):
        norm = mpmath.mpmathify(norm_text)
        if norm == 0:
            raise DataError(f"{f1.label}: petersson_norm must be non-zero")
        num = mpmath.mpf(factorial(j - 1) * factorial(j - k2))
        den = (mpmath.pi ** (2 * j + 1 - k2)
               * mpmath.mpf(2) ** (2 * j + k1 - k2) * norm)
        val = num * rot.embed(digits + 5)._mpc() / den
        return ComplexAP.from_mpc(val, digits)


def _lvalue_factor(inp: InterpInput, second_form: Eigenform, digits: int,
                   lvalue) -> tuple[ComplexAP, list[str]]:
    if lvalue is not None:
        if isinstance(lvalue, ComplexAP):
            return lvalue, []
        with mpmath.workdps(digits + 10):
            return ComplexAP.from_mpc(mpmath.mpmathify(lvalue), digits), []
    res = evaluate_L(inp.f1.base_form(), second_form, inp.chi.inverse(),
                     inp.j, digits=digits)
    notes = list(res.warnings)
    notes.append(
        f"L-value summed to n_max = {res.n_max}; certified tail bound {res.tail}"
    )
    return res.value, notes


def _finish(inp: InterpInput, digits: int, euler_exact, euler_is_exact: bool,
            gauss_exact, euler_fallback: ComplexAP | None,
            second_form: Eigenform, lvalue, petersson,
            warnings: list[str]) -> InterpResult:
    if euler_fallback is not None:
        euler_ap = euler_fallback
    else:
        den = _euler_denominator(inp.f1)
        euler_ap = _embed_scalar(
            normalize_exact((euler_exact * Fraction(1)) / den), digits)
    arch_ap = _archimedean_factor(inp.f1, inp.f2.k, inp.j, digits, petersson)
    gauss_ap = _embed_scalar(gauss_exact, digits)
    lval_ap, notes = _lvalue_factor(inp, second_form, digits, lvalue)
    total = euler_ap * arch_ap * gauss_ap * lval_ap
    return InterpResult(
        regime=inp.regime,
        factors={"euler_ratio": euler_ap, "archimedean": arch_ap,
                 "gauss_block": gauss_ap, "lvalue": lval_ap},
        exact={"euler_ratio": euler_is_exact, "archimedean": False,
               "gauss_block": True, "lvalue": False},
        total=total,
        digits=digits,
        warnings=warnings + notes,
    )


def predicted_I_crystalline(inp: InterpInput, digits: int = 50,
                            lvalue=None, petersson=None) -> InterpResult:
    """Predicted period for two crystalline forms, dissected into factors.

    The L-value against the two underlying newforms at (chi^(-1), j) is
    evaluated by series summation when possible and not supplied; outside
    the region of absolute convergence it must be passed in.  petersson
    overrides the Petersson norm stored on the first form's record.
    """
    if inp.regime != "crystalline":
        raise DataError(
            f"{inp.f2.label}: not crystalline; use the non-crystalline assembly"
        )
    if inp.chi.is_trivial():
        euler_num = euler_E_pair(inp.f1, inp.f2, inp.j, inp.chi)
        gauss = 1
    else:
        a1, _ = _stabilisation_roots(inp.f1)
        _, n2 = _trace_and_norm(inp.f2)
        core = Fraction(inp.p) ** (2 * inp.j - 2) / (a1 * a1 * n2)
        euler_num = normalize_exact(core**inp.r)
        gauss = gauss_sum(inp.chi) ** 2
    return _finish(inp, digits, euler_num, True, gauss, None,
                   inp.f2.base_form(), lvalue, petersson, [])


def predicted_I_noncrystalline(inp: InterpInput, digits: int = 50,
                               lvalue=None, petersson=None) -> InterpResult:
    """Predicted period when the second form has a character at p, dissected.

    Requires a non-trivial eps_{2,p} and non-trivial chi and chi'.  The
    two-root prefactor is assembled exactly when the stabilisation data
    allow it; otherwise it is evaluated numerically and flagged inexact.
    """
    if inp.regime != "noncrystalline":
        raise DataError(
            f"{inp.f2.label}: crystalline second form; use the crystalline assembly"
        )
    eps2p = inp.f2.eps_p
    if eps2p is None or eps2p.is_trivial():
        raise DataError(
            "non-crystalline assembly needs a second form with non-trivial "
            "character at p"
        )
    if inp.chi.is_trivial():
        raise DataError("non-crystalline assembly needs a non-trivial chi")
    if inp.chi_prime.is_trivial():
        raise DataError("non-crystalline assembly needs non-trivial "
                        "chi' = chi eps_{2,p}^(-1)")
    a1, _ = _stabilisation_roots(inp.f1)
    p, j, r, rp = inp.p, inp.j, inp.r, inp.r_prime
    gauss = gauss_sum(inp.chi) * gauss_sum(inp.chi_prime)
    warnings: list[str] = []
    euler_num = None
    fallback = None
    try:
        euler_num = normalize_exact(
            Fraction(p) ** ((j - 1) * (r + rp))
            / (a1 ** (r + rp) * inp.alpha2**r * inp.beta2**rp)
        )
        is_exact = True
    except IncompatibleExtension:
        den = _euler_denominator(inp.f1)
        with mpmath.workdps(digits + 10):
            num = _embed_scalar(Fraction(p) ** ((j - 1) * (r + rp)), digits)
            parts = (_embed_scalar(a1, digits) ** (r + rp)
                     * _embed_scalar(inp.alpha2, digits) ** r
                     * _embed_scalar(inp.beta2, digits) ** rp
                     * _embed_scalar(den, digits))
            fallback = num / parts
        is_exact = False
        warnings.append(
            "euler_ratio mixes roots of different Hecke polynomials; "
            "evaluated numerically"
        )
    return _finish(inp, digits, euler_num, is_exact, gauss, fallback,
                   inp.f2, lvalue, petersson, warnings)


def prefactor_routes(f1: Eigenform, f2: Eigenform, j: int,
                     chi: DirichletCharacter):
    """Both exact assemblies of the Gauss/Euler prefactor, for overlap checks.

    For a crystalline second form with trivial character at p and chi of
    conductor p^r > 1, the conductor branch G(chi)^2 (p^(2j-2) /
    (alpha1^2 alpha2 beta2))^r and the two-root product
    (p^(j-1)/(alpha1 alpha2))^r G(chi) (p^(j-1)/(alpha1 beta2))^(r') G(chi')
    describe the same quantity.  Returns the pair, each term computed
    independently, so callers can assert exact equality.
    """
    inp = InterpInput(f1, f2, j, chi)
    if inp.chi.is_trivial():
        raise DataError("prefactor comparison needs a non-trivial character")
    a1, _ = _stabilisation_roots(f1)
    p, r, rp = inp.p, inp.r, inp.r_prime
    n2 = normalize_exact(inp.alpha2 * inp.beta2)
    route_one = normalize_exact(
        gauss_sum(inp.chi) ** 2
        * (Fraction(p) ** (2 * j - 2) / (a1 * a1 * n2)) ** r
    )
    route_two = normalize_exact(
        gauss_sum(inp.chi) * gauss_sum(inp.chi_prime)
        * (Fraction(p) ** (j - 1) / (a1 * inp.alpha2)) ** r
        * (Fraction(p) ** (j - 1) / (a1 * inp.beta2)) ** rp
    )
    return route_one, route_two
